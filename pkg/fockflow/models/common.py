"""
Shared pydantic building blocks: the complex number field type and the
frozen base model
"""

from typing import Annotated, Any

from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer, WithJsonSchema

from ..utils.helpers import format_complex, parse_complex


def _coerce_complex(value: Any) -> complex:
    return parse_complex(value)


ComplexValue = Annotated[
    complex,
    BeforeValidator(_coerce_complex),
    PlainSerializer(format_complex, return_type=str, when_used="json"),
    WithJsonSchema({
        "type": "string",
        "description": "Complex number in a+bi form",
        "examples": ["1+0i", "0.5-2i"],
    }),
]


class FockFlowModel(BaseModel):
    """Immutable base model for specs and results"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, extra="forbid")

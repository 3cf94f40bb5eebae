"""
General utility functions for fockflow: complex number text form, JSON and
console output
"""

import json
import sys
import math
from typing import Any, Dict, List, Union

from rich.console import Console
from rich.panel import Panel
from rich.syntax import Syntax
from rich.table import Table


def parse_complex(value: Union[str, int, float, complex, Dict[str, Any]]) -> complex:
    """
    Parse a complex number from its text form or a {"re", "im"} mapping

    Accepts "a+bi", "a-bi", "bi", "a", "i", "-i" (``j`` works as well as ``i``),
    plain numbers and {"re": a, "im": b}.

    Args:
        value: Value to parse

    Returns:
        Parsed complex number

    Raises:
        ValueError: If the value is not a finite complex number
    """
    if isinstance(value, bool):
        raise ValueError(f"Not a complex number: {value!r}")
    if isinstance(value, dict):
        if set(value) - {"re", "im"}:
            raise ValueError(f"Complex mapping takes only 're' and 'im': {value!r}")
        result = complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    elif isinstance(value, (int, float, complex)):
        result = complex(value)
    elif isinstance(value, str):
        text = value.strip().replace(" ", "").replace("I", "i").replace("i", "j")
        if not text:
            raise ValueError("Empty complex literal")
        try:
            result = complex(text)
        except ValueError:
            raise ValueError(f"Invalid complex literal: {value!r} (expected a+bi)")
    else:
        raise ValueError(f"Not a complex number: {value!r}")

    if not (math.isfinite(result.real) and math.isfinite(result.imag)):
        raise ValueError(f"Complex value must be finite: {value!r}")
    return result


def format_complex(value: complex) -> str:
    """
    Format a complex number as "a+bi" with round-trip float precision

    Args:
        value: Complex number

    Returns:
        Text form such as "1.5-0.25i"
    """
    value = complex(value)
    re, im = value.real + 0.0, value.imag + 0.0
    sign = "-" if math.copysign(1.0, im) < 0 else "+"
    return f"{re!r}{sign}{abs(im)!r}i"


def _json_default(obj: Any) -> Any:
    if isinstance(obj, complex):
        return format_complex(obj)
    if hasattr(obj, "tolist"):
        return obj.tolist()
    return str(obj)


def safe_json_dumps(data: Any, indent: int = 2) -> str:
    """
    Serialize data to JSON with complex numbers in "a+bi" form

    Args:
        data: Data to serialize
        indent: JSON indentation

    Returns:
        JSON string

    Raises:
        ValueError: On NaN or infinite floats, which JSON cannot carry
    """
    return json.dumps(data, indent=indent, default=_json_default, allow_nan=False)


def split_spec(text: str, expected: int, name: str) -> List[str]:
    """
    Split a colon-separated CLI spec such as "-4:4:-4:4:200"

    Args:
        text: Spec text
        expected: Minimum number of fields
        name: Spec name used in error messages

    Returns:
        List of fields
    """
    parts = text.split(":")
    if len(parts) < expected:
        raise ValueError(f"Invalid {name} spec '{text}': expected at least {expected} ':'-separated fields")
    return parts


class RichOutputHelper:
    """Helper class for Rich console output on stderr"""

    def __init__(self, enabled: bool = True):
        """
        Initialize Rich output helper

        Args:
            enabled: Whether Rich output is enabled
        """
        self.enabled = enabled
        self.console = Console(stderr=True) if enabled else None

    def print(self, *args, **kwargs):
        """Print with Rich formatting if enabled"""
        if self.enabled and self.console:
            self.console.print(*args, **kwargs)
        else:
            print(*args, file=sys.stderr)

    def print_json(self, data: Any, title: str = "JSON Data", raw: bool = False) -> str:
        """Return JSON data as string, showing a formatted panel unless raw

        Args:
            data: Data to convert to JSON
            title: Title for the JSON panel
            raw: If True, only return the JSON without displaying it

        Returns:
            JSON string representation of the data
        """
        json_str = safe_json_dumps(data)

        if raw:
            return json_str

        if self.enabled and self.console:
            syntax = Syntax(json_str, "json", theme="monokai", line_numbers=False)
            self.console.print(Panel(syntax, title=title, expand=False))
        else:
            self.print(f"\n{title}:")
            self.print(json_str)

        return json_str

    def print_table(self, data: List[Dict[str, Any]], title: str = "Data Table"):
        """
        Print rows as a table

        Columns whose values all parse as numbers are right-aligned. Rows
        with a "pass" value of "NO" are highlighted.
        """
        if not data:
            self.print("No data to display")
            return

        columns = list(data[0].keys())
        if not (self.enabled and self.console):
            self.print(f"\n{title}:")
            for row in data:
                self.print("  " + ", ".join(f"{k}={row.get(k)}" for k in columns))
            return

        table = Table(title=title)
        for key in columns:
            numeric = all(_is_number(row.get(key)) for row in data)
            table.add_column(key.replace("_", " ").title(), justify="right" if numeric else "left")
        for row in data:
            style = "red" if row.get("pass") == "NO" else None
            table.add_row(*[str(row.get(key, "")) for key in columns], style=style)
        self.console.print(table)

    def _message(self, icon: str, label: str, style: str, message: str):
        if self.enabled and self.console:
            self.console.print(f"{icon} {message}", style=style)
        else:
            self.print(f"{label}: {message}")

    def print_success(self, message: str):
        self._message("✅", "SUCCESS", "bold green", message)

    def print_error(self, message: str):
        self._message("❌", "ERROR", "bold red", message)

    def print_warning(self, message: str):
        self._message("⚠️", "WARNING", "bold yellow", message)

    def print_info(self, message: str):
        self._message("ℹ️", "INFO", "bold blue", message)


def _is_number(value: Any) -> bool:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return True
    try:
        float(str(value))
    except ValueError:
        return False
    return True

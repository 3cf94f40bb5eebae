from setuptools import setup, find_packages


# Read README for long description
def read_readme():
    try:
        with open("README.md", "r", encoding="utf-8") as fh:
            return fh.read()
    except FileNotFoundError:
        return "Fock-Bargmann wave functions as planar potential flows"


# Read requirements
def read_requirements():
    with open("requirements.txt", "r") as f:
        return [line.split("#")[0].strip() for line in f if line.strip() and not line.startswith("#")]


setup(
    name="fockflow",
    version="0.1.0",
    author="fockflow developers",
    author_email="",
    description="Fock-Bargmann wave functions as planar potential flows",
    long_description=read_readme(),
    long_description_content_type="text/markdown",
    url="",
    packages=find_packages(include=["fockflow", "fockflow.*"]),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    python_requires=">=3.10",
    install_requires=read_requirements(),
    entry_points={
        "console_scripts": [
            "fockflow=fockflow.cli.main:main",
        ],
    },
    include_package_data=True,
    package_data={
        "fockflow": ["config/*.yaml"],
    },
)

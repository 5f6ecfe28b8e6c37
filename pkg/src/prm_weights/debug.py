"""Environment report for bug reports (`prm-weights --debug-info`)."""

from __future__ import annotations

import os
import platform
import sys
from dataclasses import dataclass
from importlib import metadata

from prm_weights.config import CONFIG_ENV_VAR

PACKAGES = ("prm-weights", "numpy", "mkdocs", "markdown", "markupsafe")
"""Distributions listed in the report."""


@dataclass
class Variable:
    """An environment variable."""

    name: str
    """Variable name."""
    value: str
    """Variable value."""


@dataclass
class Package:
    """An installed distribution."""

    name: str
    """Distribution name."""
    version: str
    """Installed version, `0.0.0` when missing."""


@dataclass
class Environment:
    """What a bug report needs to reproduce a run."""

    interpreter_name: str
    """Python implementation."""
    interpreter_version: str
    """Python implementation version."""
    interpreter_path: str
    """Path to the Python executable."""
    platform: str
    """Operating system."""
    cpu_count: int
    """Processors available to enumeration workers."""
    packages: list[Package]
    """Installed distributions."""
    variables: list[Variable]
    """Relevant environment variables."""


def _interpreter_name_version() -> tuple[str, str]:
    impl = sys.implementation.version
    version = f"{impl.major}.{impl.minor}.{impl.micro}"
    if impl.releaselevel != "final":
        version += impl.releaselevel[0] + str(impl.serial)
    return sys.implementation.name, version


def get_version(dist: str = "prm-weights") -> str:
    """Get the installed version of a distribution.

    Parameters:
        dist: A distribution name.

    Returns:
        A version number, `0.0.0` when the distribution is not installed.
    """
    try:
        return metadata.version(dist)
    except metadata.PackageNotFoundError:
        return "0.0.0"


def get_debug_info() -> Environment:
    """Collect the environment report.

    Returns:
        Environment information.
    """
    py_name, py_version = _interpreter_name_version()
    names = ["PYTHONPATH", CONFIG_ENV_VAR, *sorted(var for var in os.environ if var.startswith("PRM_WEIGHTS_"))]
    variables = [Variable(name, value) for name in dict.fromkeys(names) if (value := os.getenv(name))]
    return Environment(
        interpreter_name=py_name,
        interpreter_version=py_version,
        interpreter_path=sys.executable,
        platform=platform.platform(),
        cpu_count=os.cpu_count() or 1,
        packages=[Package(name, get_version(name)) for name in PACKAGES],
        variables=variables,
    )


def format_debug_info(info: Environment | None = None) -> str:
    """Format the environment report as a Markdown list.

    Parameters:
        info: The report, collected when not given.

    Returns:
        The Markdown text.
    """
    info = info or get_debug_info()
    lines = [
        f"- __System__: {info.platform}",
        f"- __Python__: {info.interpreter_name} {info.interpreter_version} ({info.interpreter_path})",
        f"- __CPUs__: {info.cpu_count}",
        "- __Environment variables__:",
        *(f"  - `{var.name}`: `{var.value}`" for var in info.variables),
        "- __Installed packages__:",
        *(f"  - `{pkg.name}` v{pkg.version}" for pkg in info.packages),
    ]
    return "\n".join(lines) + "\n"


def print_debug_info() -> None:
    """Print the environment report."""
    print(format_debug_info(), end="")

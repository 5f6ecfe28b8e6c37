"""Configuration of the workbench.

Options can be set in a YAML file passed with `--config`
(or pointed to by the `PRM_WEIGHTS_CONFIG` environment variable),
and overridden by command line flags.

```yaml
# prm-weights.yml
budget: 16777216
threads: 8
seed: 1
moduli:
  16: [1, 0, 0, 1, 1]
```
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any

from mkdocs.config import config_options as c
from mkdocs.config.base import Config
from mkdocs.exceptions import ConfigurationError

from prm_weights.exceptions import ConfigError
from prm_weights.logger import get_logger

_logger = get_logger(__name__)

CONFIG_ENV_VAR = "PRM_WEIGHTS_CONFIG"
"""Environment variable holding the path of the default configuration file."""


class WorkbenchConfig(Config):
    """Configuration options shared by every command."""

    budget = c.Type(int, default=2**24)
    """Maximum number of codewords an exhaustive enumeration may visit.

    Enumerations over larger codes fail fast instead of running for hours.
    """

    threads = c.Type(int, default=1)
    """Number of worker processes used by exhaustive enumerations.

    Results do not depend on this value: ranges are merged in a fixed order.
    """

    seed = c.Type(int, default=0)
    """Seed of the randomized low-weight search."""

    time_limit = c.Optional(c.Type((int, float)))
    """Wall-clock cap in seconds for one enumeration, or no cap."""

    max_q = c.Type(int, default=27)
    """Largest field order accepted."""

    output_format = c.Choice(("json", "csv", "md", "html"), default="json")
    """Output format of the command line."""

    samples = c.Type(int, default=2000)
    """Number of candidates drawn by the randomized search."""

    union_budget = c.Type(int, default=10**6)
    """Maximum number of hyperplane combinations tried when decomposing a zero set."""

    subspace_budget = c.Type(int, default=10**6)
    """Maximum number of canonical subspaces enumerated per dimension."""

    scalar_skip = c.Type(bool, default=True)
    """Whether enumerations visit one codeword per line of scalar multiples."""

    timing = c.Type(bool, default=False)
    """Whether records carry their wall-clock time.

    Leave disabled to keep output byte-identical across runs.
    """

    moduli = c.Type(dict, default={})
    """Field order to modulus coefficients (highest degree first), overriding the built-in table."""


_POSITIVE_OPTIONS = ("budget", "threads", "max_q", "samples", "union_budget", "subspace_budget")


def load_config(path: str | Path | None = None, **overrides: Any) -> WorkbenchConfig:
    """Load and validate the configuration.

    Parameters:
        path: A YAML configuration file. Defaults to the file named by `PRM_WEIGHTS_CONFIG`, if any.
        **overrides: Option values taking precedence over the file. `None` values are ignored.

    Raises:
        ConfigError: When the file cannot be read or an option is invalid.

    Returns:
        The validated configuration.
    """
    config_path = path or os.environ.get(CONFIG_ENV_VAR)
    config = WorkbenchConfig(config_file_path=str(config_path) if config_path else None)
    try:
        if config_path:
            _logger.debug("Loading configuration from %s", config_path)
            with Path(config_path).open(encoding="utf8") as config_file:
                config.load_file(config_file)
        config.load_dict({key: value for key, value in overrides.items() if value is not None})
    except (OSError, ConfigurationError) as error:
        raise ConfigError(f"Cannot load configuration: {error}") from error

    failed, warnings = config.validate()
    for key, warning in warnings:
        _logger.warning("Config value '%s': %s", key, warning)
    errors = [f"{key}: {error}" for key, error in failed]
    errors.extend(f"{key}: must be positive" for key in _POSITIVE_OPTIONS if not failed and config[key] < 1)
    if errors:
        raise ConfigError("Invalid configuration:\n  " + "\n  ".join(errors))
    return config

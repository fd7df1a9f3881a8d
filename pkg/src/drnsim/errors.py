"""Exception hierarchy for drnsim."""


class DrnSimError(Exception):
    """Base class for all simulator errors."""


class ConfigError(DrnSimError, ValueError):
    """A configuration value is missing, malformed or violates an invariant."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


class ConfigKeyError(ConfigError, KeyError):
    """Unknown configuration or sweep parameter name."""

    def __init__(self, key):
        super().__init__(key, "unknown parameter name")

    def __str__(self):
        return self.args[0]


class DegenerateGeometry(DrnSimError):
    """Two nodes are co-located, so a power-law path loss is undefined."""


class NoEnergySource(DrnSimError):
    """A D2D transmitter has no cellular user to harvest from."""


class BandUndefinedEE(DrnSimError):
    """No cellular user transmits on a band, so its EE has a zero denominator."""


class UndefinedEE(DrnSimError):
    """No cellular user transmits on any band."""


class AllTrialsDegenerate(DrnSimError):
    """Every Monte Carlo trial produced an undefined EE."""


class NoBracket(DrnSimError):
    """The altitude range does not bracket the requested EE threshold."""

    def __init__(self, ee_low, ee_high, threshold):
        self.ee_low = ee_low
        self.ee_high = ee_high
        self.threshold = threshold
        super().__init__(
            f"threshold {threshold:.6g} not bracketed: "
            f"EE(h_low)={ee_low:.6g}, EE(h_high)={ee_high:.6g}"
        )

class InstanceTooLarge(ValueError):
    """An exhaustive oracle was asked to solve an instance beyond its guard."""


class CapExceeded(RuntimeError):
    """Too many information states were reached."""


class NonTotalMap(ValueError):
    """A transition, observation or cost map is undefined somewhere it is needed."""

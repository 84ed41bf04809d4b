"""Sentinel results returned in place of a value."""

import enum


class Marker(enum.Enum):
    OVERFLOW = "overflow"
    SINGULAR = "singular"
    CONTAINS_HYPERPLANE = "contains-hyperplane"
    INCONCLUSIVE = "inconclusive"
    SMOOTH = "smooth"

    def __repr__(self):
        return f"Marker.{self.name}"


OVERFLOW = Marker.OVERFLOW
SINGULAR = Marker.SINGULAR
CONTAINS_HYPERPLANE = Marker.CONTAINS_HYPERPLANE
INCONCLUSIVE = Marker.INCONCLUSIVE
SMOOTH = Marker.SMOOTH

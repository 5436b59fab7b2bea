"""Closed-form fixed-space dimensions, conductors, depths and genericity.

Every representation is named by a :class:`ReprDescriptor`, which carries
only the invariants the formulas consume (conductors, levels, members).
``tower`` is "K" or "Kp" (K_m or K'_m; for U(1,1) the unitary analogues).

>>> dim_formula(ReprDescriptor("SL2", "steinberg"), 3, "K")
5
>>> dim_formula(ReprDescriptor("SL2", "sc-ram", (("l", 1), ("member", 1))), 4, "K")
2
>>> conductor_formula(ReprDescriptor("U11", "u11-exceptional")).newform_dim
2
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

__all__ = [
    "ReprDescriptor",
    "DimTable",
    "ConductorInfo",
    "DepthInfo",
    "FAMILIES",
    "dim_formula",
    "conductor_formula",
    "depth_relations",
    "genericity_assignment",
    "dim_table",
    "descriptor_sweep",
    "first_nonzero",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1
TOWER_NAMES = ("K", "Kp")

# family -> (group, parameter names, allowed members or None)
FAMILIES: dict[str, tuple[str, tuple[str, ...], tuple | None]] = {
    "unram-ps": ("SL2", (), None),
    "steinberg": ("SL2", (), None),
    "ram-ps": ("SL2", ("c", "chi2_trivial"), None),
    "ram-packet": ("SL2", ("member",), (1, 2)),
    "unram-packet": ("SL2", ("member",), (1, 2)),
    "sc-unram2": ("SL2", ("l", "member"), ("pi", "pip")),
    "sc-unram4": ("SL2", ("member",), ("pi1", "pi2", "pi1p", "pi2p")),
    "sc-ram": ("SL2", ("l", "member"), (1, 2)),
    "u11-ps": ("U11", ("c",), None),
    "u11-exceptional": ("U11", (), None),
    "u11-steinberg": ("U11", (), None),
    "u11-packet": ("U11", ("member",), (1, 2)),
    "u11-sc-ram": ("U11", ("rho0",), None),
    "u11-sc-unram": ("U11", ("rho0", "member"), ("pi", "pip")),
}

PS_FAMILIES = {"unram-ps", "steinberg", "ram-ps", "ram-packet", "unram-packet",
               "u11-ps", "u11-exceptional", "u11-steinberg", "u11-packet"}
SC_FAMILIES = {"sc-unram2", "sc-unram4", "sc-ram", "u11-sc-ram", "u11-sc-unram"}


@dataclass(frozen=True)
class ReprDescriptor:
    group: str
    family: str
    params: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        group, names, members = FAMILIES[self.family]
        if group != self.group:
            raise ValueError(f"family {self.family} belongs to {group}")
        given = dict(self.params)
        if set(given) != set(names):
            raise ValueError(f"{self.family} needs parameters {names}, got {tuple(given)}")
        if members is not None and given["member"] not in members:
            raise ValueError(f"member must be one of {members}")
        for key in ("l", "c"):
            if key in given and given[key] < (1 if key == "l" else 0):
                raise ValueError(f"parameter {key} out of range")
        if self.family == "ram-ps":
            if given["c"] < 1:
                raise ValueError("ram-ps needs c >= 1")
            if given["chi2_trivial"] and given["c"] != 1:
                raise ValueError("chi^2 trivial on squared units forces c = 1")
        if self.family == "u11-sc-ram":
            r = Fraction(given["rho0"])
            if r < Fraction(1, 2) or r.denominator != 2:
                raise ValueError("ramified rho0 is a positive half-odd integer")
        if self.family == "u11-sc-unram" and (int(given["rho0"]) != given["rho0"] or given["rho0"] < 0):
            raise ValueError("unramified rho0 is a non-negative integer")
        object.__setattr__(self, "params", tuple(sorted(given.items())))

    def p(self, key):
        return dict(self.params)[key]

    def with_member(self, member) -> "ReprDescriptor":
        d = dict(self.params)
        d["member"] = member
        return ReprDescriptor(self.group, self.family, tuple(d.items()))

    def label(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.group}:{self.family}" + (f"[{inner}]" if inner else "")

    def to_json(self) -> dict:
        return {"group": self.group, "family": self.family,
                "params": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.params}}


def _ceil_half(x: int) -> int:
    return ceil(Fraction(x, 2))


def _floor_half(x: int) -> int:
    return floor(Fraction(x, 2))


def _swap(tower: str) -> str:
    return "Kp" if tower == "K" else "K"


def dim_formula(d: ReprDescriptor, m: int, tower: str = "K") -> int:
    """Dimension of the (eta, K_m)- or (eta, K'_m)-fixed space.

    eta is any character at which the stated formula applies (for the
    principal series: the achieving characters of :func:`conductor_formula`).

    >>> [dim_formula(ReprDescriptor("SL2", "unram-ps"), m) for m in range(4)]
    [1, 2, 4, 6]
    >>> [dim_formula(ReprDescriptor("SL2", "sc-unram4", (("member", "pi1"),)), m, "Kp") for m in range(1, 4)]
    [0, 1, 1]
    """
    if tower not in TOWER_NAMES:
        raise ValueError("tower must be K or Kp")
    if m < 0:
        return 0
    f = d.family
    if f == "unram-ps":
        return 1 if m == 0 else 2 * m
    if f == "steinberg":
        return 0 if m == 0 else 2 * m - 1
    if f == "ram-ps":
        c = d.p("c")
        if d.p("chi2_trivial"):
            return 0 if m == 0 else 2 * m
        if m < c:
            return 0
        return 1 if m == c else 2 * (m - c) + 1
    if f == "ram-packet":
        return 0 if m == 0 else m
    if f == "unram-packet":
        own = "K" if d.p("member") == 1 else "Kp"
        if m == 0:
            return 1 if tower == own else 0
        return 2 * _floor_half(m) + 1 if tower == own else 2 * _floor_half(m - 1) + 1
    if f == "sc-unram2":
        l = d.p("l")
        if m < 2 * l:
            return 0
        big = 2 * _ceil_half(m - 2 * l + 1)
        small = 2 * _floor_half(m - 2 * l + 1)
        # l odd: pi is large on K', l even: on K; pi' is the other way round
        big_tower = "Kp" if l % 2 else "K"
        if d.p("member") == "pip":
            big_tower = _swap(big_tower)
        return big if tower == big_tower else small
    if f == "sc-unram4":
        if m < 2:
            return 0
        big_tower = "K" if d.p("member").endswith("p") else "Kp"
        return _ceil_half(m - 1) if tower == big_tower else _floor_half(m - 1)
    if f == "sc-ram":
        l = d.p("l")
        return 0 if m <= 2 * l else m - 2 * l
    if f == "u11-ps":
        return max(m - d.p("c") + 1, 0)
    if f == "u11-exceptional":
        return 0 if m == 0 else m + 1
    if f == "u11-steinberg":
        return max(m, 0)
    if f == "u11-packet":
        own = "K" if d.p("member") == 1 else "Kp"
        return _ceil_half(m + 1) if tower == own else _ceil_half(m)
    if f == "u11-sc-ram":
        c = int(2 * Fraction(d.p("rho0")) + 2)
        return max(m - c + 1, 0)
    if f == "u11-sc-unram":
        rho0 = d.p("rho0")
        c = 2 * rho0 + 2
        big_tower = "K" if rho0 % 2 else "Kp"
        if d.p("member") == "pip":
            big_tower = _swap(big_tower)
        if tower == big_tower:
            return max(_ceil_half(m - c + 1), 0)
        return max(_ceil_half(m - c - 1), 0)
    raise AssertionError(f)


@dataclass(frozen=True)
class ConductorInfo:
    conductor: int
    achieving_eta: str
    newform_dim: int
    newform_tower: str

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "achieving_eta": self.achieving_eta,
                "newform_dim": self.newform_dim, "newform_tower": self.newform_tower}


_ETA_TEXT = {
    "unram-ps": "eta trivial on O^x",
    "steinberg": "eta trivial on O^x",
    "ram-ps": "eta = chi or chi^-1 on O^x",
    "ram-packet": "eta = omega_{E'/F} on O^x",
    "unram-packet": "eta trivial on O^x",
    "sc-unram2": "any eta with eta(-1) = omega(-1) and c(eta) <= l",
    "sc-unram4": "any eta with eta(-1) = omega(-1) and c(eta) <= 1",
    "sc-ram": "any eta with eta(-1) = omega(-1) and c(eta) <= l",
    "u11-ps": "etabar = chibar or s(chibar)^-1 on O_E^x",
    "u11-exceptional": "etabar = chibar on O_E^x (= s(chibar)^-1 there)",
    "u11-steinberg": "etabar = chibar or s(chibar)^-1 on O_E^x",
    "u11-packet": "etabar = chibar or s(chibar)^-1 on O_E^x",
    "u11-sc-ram": "etabar with etabar|E^1 = omega and c(etabar|O_F^x) <= rho0 + 1/2",
    "u11-sc-unram": "etabar with etabar|E^1 = omega and c(etabar|O_F^x) <= rho0 + 1",
}


def _stated_conductor(d: ReprDescriptor) -> int:
    f = d.family
    if f in ("unram-ps", "unram-packet", "u11-packet"):
        return 0
    if f in ("steinberg", "ram-packet", "u11-steinberg", "u11-exceptional"):
        return 1
    if f == "ram-ps":
        return d.p("c")
    if f == "u11-ps":
        return d.p("c")
    if f == "sc-unram2":
        return 2 * d.p("l")
    if f == "sc-unram4":
        return 2
    if f == "sc-ram":
        return 2 * d.p("l") + 1
    if f in ("u11-sc-ram", "u11-sc-unram"):
        return int(2 * Fraction(d.p("rho0")) + 2)
    raise AssertionError(f)


def conductor_formula(d: ReprDescriptor) -> ConductorInfo:
    """Conductor, the characters achieving it, and the newform dimension.

    The newform dimension is read off the dimension table at the conductor,
    on the tower where the newform lives.

    >>> conductor_formula(ReprDescriptor("SL2", "ram-ps", (("c", 2), ("chi2_trivial", False)))).newform_dim
    1
    """
    c = _stated_conductor(d)
    dims = {t: dim_formula(d, c, t) for t in TOWER_NAMES}
    tower = "K" if dims["K"] >= dims["Kp"] else "Kp"
    return ConductorInfo(c, _ETA_TEXT[d.family], dims[tower], tower)


@dataclass(frozen=True)
class DepthInfo:
    conductor: int
    depth: Fraction | None
    minimal_depth: Fraction | None
    restriction: ReprDescriptor | None
    conductor_equal: bool | None

    def to_json(self) -> dict:
        return {"conductor": self.conductor,
                "depth": None if self.depth is None else str(self.depth),
                "minimal_depth": None if self.minimal_depth is None else str(self.minimal_depth),
                "restriction": None if self.restriction is None else self.restriction.label(),
                "conductor_equal": self.conductor_equal}


def _sl2_member_of(d: ReprDescriptor) -> ReprDescriptor | None:
    """An SL2 descriptor occurring in the restriction of a supercuspidal U(1,1) descriptor."""
    if d.family == "u11-sc-ram":
        l = int(Fraction(d.p("rho0")) + Fraction(1, 2))
        return ReprDescriptor("SL2", "sc-ram", (("l", l), ("member", 1)))
    if d.family == "u11-sc-unram":
        return ReprDescriptor("SL2", "sc-unram2", (("l", d.p("rho0") + 1), ("member", "pi")))
    return None


def depth_relations(d: ReprDescriptor) -> DepthInfo:
    """Depth from the conductor, and the U(1,1) to SL2 conductor comparison.

    >>> depth_relations(ReprDescriptor("SL2", "ram-ps", (("c", 3), ("chi2_trivial", False)))).depth
    Fraction(2, 1)
    >>> info = depth_relations(ReprDescriptor("U11", "u11-sc-unram", (("rho0", 1), ("member", "pi"))))
    >>> info.conductor, info.conductor_equal
    (4, True)
    """
    c = conductor_formula(d).conductor
    if d.group == "SL2":
        if d.family in PS_FAMILIES:
            return DepthInfo(c, Fraction(max(c - 1, 0)), None, None, None)
        return DepthInfo(c, max(Fraction(c - 2, 2), Fraction(0)), None, None, None)
    if d.family in SC_FAMILIES:
        rho0 = Fraction(c - 2, 2)
        assert rho0 == Fraction(d.p("rho0"))
        member = _sl2_member_of(d)
        eq = conductor_formula(member).conductor == c
        return DepthInfo(c, None, rho0, member, eq)
    return DepthInfo(c, None, None, None, None)


def genericity_assignment(d: ReprDescriptor) -> dict[str, object]:
    """Square class of a (for psi_a) -> generic member, for the members that
    the known results pin down.  Single representations map every class
    they are generic for to themselves.

    >>> genericity_assignment(ReprDescriptor("SL2", "sc-unram4", (("member", "pi1"),)))
    {'1': 'pi1p', 'pi': 'pi1', 'eps': 'pi2p', 'eps*pi': 'pi2'}
    """
    f = d.family
    if f == "unram-packet":
        return {"1": 1, "eps": 1, "pi": 2, "eps*pi": 2}
    if f == "ram-packet":
        return {"1": 1, "eps": 2}
    if f == "sc-unram4":
        return {"1": "pi1p", "pi": "pi1", "eps": "pi2p", "eps*pi": "pi2"}
    if f == "sc-unram2":
        if d.p("l") % 2 == 0:
            return {"1": "pi", "pi": "pip"}
        return {"1": "pip", "pi": "pi"}
    if f == "sc-ram":
        return {"1": 1, "eps": 2}
    if f == "u11-packet":
        return {"1": 1, "pi": 2}
    if f == "u11-sc-unram":
        if d.p("rho0") % 2:
            return {"1": "pi", "pi": "pip"}
        return {"1": "pip", "pi": "pi"}
    if f == "u11-sc-ram":
        return {"1": "pi"}
    return {a: "pi" for a in ("1", "eps", "pi", "eps*pi")}


def first_nonzero(d: ReprDescriptor, m_max: int = 12) -> int | None:
    for m in range(m_max + 1):
        if any(dim_formula(d, m, t) for t in TOWER_NAMES):
            return m
    return None


@dataclass
class DimTable:
    descriptor: ReprDescriptor
    eta: str
    rows: list  # (m, tower, dim)
    conductor: int
    achieving_eta: str
    genericity: dict = field(default_factory=dict)

    def __post_init__(self):
        assert all(r[2] >= 0 for r in self.rows)

    def to_json(self) -> dict:
        return {"schema": SCHEMA_VERSION, "descriptor": self.descriptor.to_json(), "eta": self.eta,
                "rows": [{"m": m, "tower": t, "dim": v} for m, t, v in self.rows],
                "conductor": self.conductor, "achieving_eta": self.achieving_eta,
                "genericity": {k: str(v) for k, v in self.genericity.items()}}

    def to_csv(self) -> str:
        lines = ["m,tower,dim"] + [f"{m},{t},{v}" for m, t, v in self.rows]
        return "\n".join(lines) + "\n"

    def to_markdown(self) -> str:
        lines = [f"**{self.descriptor.label()}** conductor {self.conductor}", "",
                 "| m | tower | dim |", "|---|---|---|"]
        lines += [f"| {m} | {t} | {v} |" for m, t, v in self.rows]
        return "\n".join(lines) + "\n"

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def dim_table(d: ReprDescriptor, ms, towers=TOWER_NAMES) -> DimTable:
    info = conductor_formula(d)
    rows = [(m, t, dim_formula(d, m, t)) for m in ms for t in towers]
    return DimTable(d, info.achieving_eta, rows, info.conductor, info.achieving_eta, genericity_assignment(d))


def descriptor_sweep(l_max: int = 3, c_max: int = 3) -> list[ReprDescriptor]:
    """Every descriptor with level <= l_max and character conductor <= c_max."""
    out = [ReprDescriptor("SL2", "unram-ps"), ReprDescriptor("SL2", "steinberg"),
           ReprDescriptor("U11", "u11-exceptional"), ReprDescriptor("U11", "u11-steinberg")]
    for c in range(1, c_max + 1):
        out.append(ReprDescriptor("SL2", "ram-ps", (("c", c), ("chi2_trivial", False))))
    out.append(ReprDescriptor("SL2", "ram-ps", (("c", 1), ("chi2_trivial", True))))
    for c in range(0, c_max + 1):
        out.append(ReprDescriptor("U11", "u11-ps", (("c", c),)))
    for mem in (1, 2):
        out.append(ReprDescriptor("SL2", "ram-packet", (("member", mem),)))
        out.append(ReprDescriptor("SL2", "unram-packet", (("member", mem),)))
        out.append(ReprDescriptor("U11", "u11-packet", (("member", mem),)))
    for mem in FAMILIES["sc-unram4"][2]:
        out.append(ReprDescriptor("SL2", "sc-unram4", (("member", mem),)))
    for l in range(1, l_max + 1):
        for mem in ("pi", "pip"):
            out.append(ReprDescriptor("SL2", "sc-unram2", (("l", l), ("member", mem))))
        for mem in (1, 2):
            out.append(ReprDescriptor("SL2", "sc-ram", (("l", l), ("member", mem))))
        out.append(ReprDescriptor("U11", "u11-sc-ram", (("rho0", Fraction(2 * l - 1, 2)),)))
    for rho0 in range(0, l_max):
        for mem in ("pi", "pip"):
            out.append(ReprDescriptor("U11", "u11-sc-unram", (("rho0", rho0), ("member", mem))))
    return out

"""Command-line front end: dimension tables, conductors, packets, Whittaker
values and the verify harness comparing brute force with closed forms.

Exit codes: 0 pass, 1 usage error, 2 verification mismatch, 3 resource guard.

>>> cfg = RunConfig(family="unram-ps", p=3, m_lo=0, m_hi=3)
>>> RunConfig.from_canonical(cfg.canonical()) == cfg
True
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, fields, replace
from fractions import Fraction
from typing import Callable

from sympy import perfect_power, isprime

from .characters import (FieldChar, UnitChar, legendre_char, omega_EF, parse_char_literal, unit_group,
                         unramified_char)
from .cyclotomic import QHalfGraded, RootOfUnity
from .formulas import (FAMILIES, ReprDescriptor, conductor_formula, depth_relations, descriptor_sweep,
                       dim_formula, first_nonzero, genericity_assignment)
from .local_rings import PrecisionError, RingSpec, make_quad_ext, make_ring

__all__ = ["RunConfig", "FamilyCase", "build_cases", "main", "run_suite", "SUITES",
           "EXIT_OK", "EXIT_USAGE", "EXIT_MISMATCH", "EXIT_GUARD"]

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_GUARD = 0, 1, 2, 3

FAMILY_ALIASES = {"sc4": "sc-unram4", "sc2": "sc-unram2", "u11-unram-ps": "u11-packet",
                  "u11-st": "u11-steinberg", "st": "steinberg"}
MEMBERS = {"ram-packet": (1, 2), "unram-packet": (1, 2), "u11-packet": (1, 2),
           "sc-unram4": ("pi1", "pi2", "pi1p", "pi2p"), "sc-unram2": ("pi", "pip"), "sc-ram": (1, 2),
           "u11-sc-unram": ("pi", "pip")}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    backend: str = "mixed"
    p: int = 3
    f: int = 1
    N: int = 0  # 0: choose from the m-range
    family: str = "unram-ps"
    chi: str = ""
    cchi: int = 1
    chi2_trivial: bool = False
    l: int = 1
    rho0: str = "0"
    member: str = ""
    m_lo: int = 0
    m_hi: int = 3
    tower: str = "both"
    format: str = "md"
    explain: bool = False
    suite: str = "all"
    scaling: str = ""

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def canonical_family(self) -> str:
        return FAMILY_ALIASES.get(self.family, self.family)

    def precision(self) -> int:
        return self.N or max(self.m_hi, self.cchi, 2 * self.l + 1, 1) + 3

    def canonical(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in sorted(asdict(self).items()))

    @classmethod
    def from_canonical(cls, text: str) -> "RunConfig":
        return cls(**_coerce_pairs(_parse_pairs(text)))


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _parse_pairs(text: str) -> dict[str, str]:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def _coerce_pairs(pairs: dict[str, str]) -> dict:
    out = {}
    for k, v in pairs.items():
        if k == "q":
            out.update(_split_q(int(v)))
            continue
        if k == "m":
            out["m_lo"], out["m_hi"] = _parse_range(v)
            continue
        if k not in _FIELD_TYPES:
            raise UsageError(f"unknown config key {k!r}")
        t = _FIELD_TYPES[k]
        if t == "int":
            out[k] = int(v)
        elif t == "bool":
            out[k] = v.lower() in ("1", "true", "yes", "on")
        else:
            out[k] = v
    return out


def _split_q(q: int) -> dict:
    if isprime(q):
        return {"p": q, "f": 1}
    pp = perfect_power(q)
    if not pp or not isprime(pp[0]):
        raise UsageError(f"q = {q} is not a prime power")
    return {"p": int(pp[0]), "f": int(pp[1]), "backend": "equal"}


def _parse_range(text: str) -> tuple[int, int]:
    text = str(text)
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
    else:
        lo = hi = int(text)
    if lo < 0 or hi < lo:
        raise UsageError(f"bad m-range {text!r}")
    return lo, hi


# ---------------------------------------------------------------------------
# families


@dataclass
class FamilyCase:
    """One representation: closed form plus (when in scope) brute force."""

    member: str
    descriptor: ReprDescriptor
    brute: Callable[[int, str], int | None] | None
    explain: Callable[[int, str], dict] | None = None
    whittaker_space: Callable[[], object] | None = None  # newform space for Whittaker checks


def _ring(cfg: RunConfig) -> RingSpec:
    return make_ring(cfg.backend, cfg.p, cfg.f, cfg.precision())


def _chi2_trivial(chi: FieldChar) -> bool:
    return (chi.unit**2).is_trivial()


def choose_ram_chi(R: RingSpec, c: int, chi2_trivial: bool) -> FieldChar:
    """First character of conductor c with the requested chi^2 behaviour on units."""
    for u in unit_group(R, c).chars():
        chi = FieldChar(u)
        if u.conductor == c and _chi2_trivial(chi) == chi2_trivial:
            return chi
    raise UsageError(f"no character of conductor {c} with chi^2 {'trivial' if chi2_trivial else 'non-trivial'} "
                     f"on units at q = {R.q}")


def choose_u11_chi(R: RingSpec, c: int, exceptional: bool = False) -> FieldChar:
    """A character of E^x: c(chibar|F) = c, or the exceptional kind
    (ramified, trivial on the norms O_F^x)."""
    from .principal_series import restrict_char_to_F

    E = make_quad_ext(R)
    if not exceptional and c == 0:
        return unramified_char(E, RootOfUnity.one())
    n = max(c, 1)
    for u in unit_group(E, n).chars():
        chi = FieldChar(u)
        cf = restrict_char_to_F(chi).conductor
        if exceptional and cf == 0 and u.conductor >= 1:
            return chi
        if not exceptional and cf == c:
            return chi
    raise UsageError("no unitary character with the requested conductor")


def _ps_brute(chi, eta, flavor_towers):
    from .principal_series import fixed_space

    def brute(m, tower):
        return fixed_space(chi, eta, m, flavor_towers[tower]).dim

    def explain(m, tower):
        sp = fixed_space(chi, eta, m, flavor_towers[tower])
        return {"working_level": sp.model.M, "compatible_orbits": len(sp.model.compatible)}

    return brute, explain


def _packet_brute(chi, eta, flavor_towers, component: int):
    from .principal_series import packet_split

    def brute(m, tower):
        s = packet_split(chi, eta, m, flavor_towers[tower])
        return len((s.component1 if component == 1 else s.component2).basis)

    return brute


SL2_TOWERS = {"K": "K", "Kp": "Kp"}
U11_TOWERS = {"K": "Kbar", "Kp": "Kbarp"}


def level_one_data(R: RingSpec, split: bool):
    from .supercuspidal import cuspidal_character, regular_thetas

    for th in regular_thetas(R):
        d = cuspidal_character(R, th)
        if d.splits == split:
            return d
    raise UsageError("no level-one cuspidal datum of the requested kind")


def admissible_etas(data, max_conductor: int = 1) -> list[UnitChar]:
    """eta on (O/P)^x with eta(-1) = omega_sigma(-1)."""
    R = data.ring
    out = []
    for e in unit_group(R, max_conductor).chars():
        if e(R.neg(R.one())) == data.omega_minus_one():
            out.append(e)
    return out


def _mackey_case(data, eta, member: str, constituent: int, primed: bool, desc: ReprDescriptor) -> FamilyCase:
    from .supercuspidal import mackey_dims

    def brute(m, tower):
        t = tower if not primed else ("Kp" if tower == "K" else "K")
        return mackey_dims(data, eta, m, t, constituent).dim

    def explain(m, tower):
        t = tower if not primed else ("Kp" if tower == "K" else "K")
        return mackey_dims(data, eta, m, t, constituent).to_json()

    return FamilyCase(member, desc, brute, explain)


def build_cases(cfg: RunConfig, eta_override: UnitChar | None = None) -> list[FamilyCase]:
    """The representations selected by ``cfg`` (one per packet member)."""
    fam = cfg.canonical_family
    if fam not in FAMILIES:
        raise UsageError(f"unknown family {cfg.family!r}; choose from {sorted(FAMILIES) + sorted(FAMILY_ALIASES)}")
    members = MEMBERS.get(fam)
    if cfg.member and cfg.member != "all":
        if members is None:
            raise UsageError(f"family {fam} has no members")
        wanted = [m for m in members if str(m) == cfg.member]
        if not wanted:
            raise UsageError(f"member must be one of {members}")
    elif cfg.member == "all" or members is None:
        wanted = list(members or [None])
    else:
        wanted = [members[0]]
    R = _ring(cfg)
    cases = []
    for mem in wanted:
        cases.append(_one_case(cfg, fam, mem, R, eta_override))
    return cases


def _one_case(cfg: RunConfig, fam: str, mem, R: RingSpec, eta_override) -> FamilyCase:
    from .principal_series import fixed_space, packet_split, steinberg_subspace

    label = "pi" if mem is None else str(mem)
    if fam == "unram-ps":
        chi = parse_char_literal(cfg.chi or "trivial", R, 0)
        if not chi.is_unramified:
            raise UsageError("unram-ps needs an unramified character")
        b, e = _ps_brute(chi, None, SL2_TOWERS)
        return FamilyCase(label, ReprDescriptor("SL2", fam), b, e,
                          lambda: fixed_space(chi, None, 0, "K"))
    if fam == "steinberg":
        return FamilyCase(label, ReprDescriptor("SL2", fam),
                          lambda m, t: steinberg_subspace(R, m).dim if t == "K" else None, None,
                          lambda: steinberg_subspace(R, 1))
    if fam == "ram-ps":
        chi = parse_char_literal(cfg.chi, R, cfg.cchi) if cfg.chi else choose_ram_chi(R, cfg.cchi, cfg.chi2_trivial)
        c = chi.conductor
        flag = _chi2_trivial(chi)
        if c < 1:
            raise UsageError("ram-ps needs a ramified character")
        d = ReprDescriptor("SL2", fam, (("c", c), ("chi2_trivial", flag)))
        b, e = _ps_brute(chi, chi.unit, SL2_TOWERS)
        return FamilyCase(label, d, b, e, lambda: fixed_space(chi, chi.unit, c, "K"))
    if fam == "ram-packet":
        chi = legendre_char(R, 1)
        comp = int(mem)
        d = ReprDescriptor("SL2", fam, (("member", comp),))
        return FamilyCase(label, d, _packet_brute(chi, chi.unit, SL2_TOWERS, comp), None,
                          lambda: _packet_component(packet_split(chi, chi.unit, 1, "K"), comp))
    if fam == "unram-packet":
        chi = omega_EF(R)
        comp = int(mem)
        d = ReprDescriptor("SL2", fam, (("member", comp),))
        tw = "K" if comp == 1 else "Kp"
        return FamilyCase(label, d, _packet_brute(chi, None, SL2_TOWERS, comp), None,
                          lambda: _packet_component(packet_split(chi, None, 0, tw), comp))
    if fam == "u11-ps":
        chi = choose_u11_chi(R, cfg.cchi)
        eta = None if cfg.cchi == 0 else chi.unit
        d = ReprDescriptor("U11", fam, (("c", cfg.cchi),))
        b, e = _ps_brute(chi, eta, U11_TOWERS)
        return FamilyCase(label, d, b, e, lambda: fixed_space(chi, eta, cfg.cchi, "Kbar"))
    if fam == "u11-exceptional":
        chi = choose_u11_chi(R, 0, exceptional=True)
        b, e = _ps_brute(chi, chi.unit, U11_TOWERS)
        return FamilyCase(label, ReprDescriptor("U11", fam), b, e, lambda: fixed_space(chi, chi.unit, 1, "Kbar"))
    if fam == "u11-packet":
        E = make_quad_ext(R)
        chi = unramified_char(E, RootOfUnity(2, 1))
        comp = int(mem)
        tw = "Kbar" if comp == 1 else "Kbarp"
        return FamilyCase(label, ReprDescriptor("U11", fam, (("member", comp),)),
                          _packet_brute(chi, None, U11_TOWERS, comp), None,
                          lambda: _packet_component(packet_split(chi, None, 0, tw), comp))
    if fam == "u11-steinberg":
        return FamilyCase(label, ReprDescriptor("U11", fam), None)
    if fam in ("sc-unram4", "sc-unram2"):
        split = fam == "sc-unram4"
        data = level_one_data(R, split)
        eta = eta_override if eta_override is not None else admissible_etas(data)[0]
        if split:
            gen = data.generic_labels.index(1)  # sigma_1 is the psi-bar-generic constituent
            constituent = gen if mem in ("pi1", "pi1p") else 1 - gen
            d = ReprDescriptor("SL2", fam, (("member", mem),))
        else:
            if cfg.l != 1:
                raise UsageError("brute force covers level one only")
            constituent = 0
            d = ReprDescriptor("SL2", fam, (("l", 1), ("member", mem)))
        return _mackey_case(data, eta, label, constituent, str(mem).endswith("p"), d)
    if fam == "sc-ram":
        return FamilyCase(label, ReprDescriptor("SL2", fam, (("l", cfg.l), ("member", int(mem)))), None)
    if fam == "u11-sc-ram":
        return FamilyCase(label, ReprDescriptor("U11", fam, (("rho0", Fraction(cfg.rho0)),)), None)
    if fam == "u11-sc-unram":
        return FamilyCase(label, ReprDescriptor("U11", fam, (("rho0", int(cfg.rho0)), ("member", mem))), None)
    raise UsageError(f"unsupported family {fam}")


def _packet_component(split, comp: int):
    return split.component1 if comp == 1 else split.component2


# ---------------------------------------------------------------------------
# rendering


def _towers(cfg: RunConfig) -> list[str]:
    if cfg.tower == "both":
        return ["K", "Kp"]
    if cfg.tower not in ("K", "Kp"):
        raise UsageError("tower must be K, Kp or both")
    return [cfg.tower]


def _render(payload: dict, rows: list[dict], cfg: RunConfig, columns: list[str]) -> str:
    if cfg.format == "json":
        out = dict(payload)
        out["rows"] = rows
        return json.dumps(out, sort_keys=True, indent=2) + "\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow(["" if r.get(c) is None else r.get(c) for c in columns])
        return buf.getvalue()
    if cfg.format == "md":
        head = [f"{k}: {json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v}"
                for k, v in sorted(payload.items())]
        lines = head + ["", "| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
        for r in rows:
            lines.append("| " + " | ".join("-" if r.get(c) is None else str(r.get(c)) for c in columns) + " |")
        return "\n".join(lines) + "\n"
    raise UsageError("format must be json, csv or md")


def fmt_value(v: QHalfGraded) -> str:
    if v.c1.is_zero():
        r = v.c0.rational_value()
        if r is not None:
            return str(r)
    return repr(v)


# ---------------------------------------------------------------------------
# commands


def cmd_ring_info(cfg: RunConfig) -> tuple[str, int]:
    R = _ring(cfg)
    F = R.field_
    rows = []
    for n in range(1, min(R.N, 3) + 1):
        g = unit_group(R, n)
        rows.append({"n": n, "order": len(g.elements), "invariants": "x".join(map(str, g.invariants))})
    payload = {"backend": R.backend, "p": R.p, "f": R.f, "q": R.q, "N": R.N,
               "eps_residue": R.residue(R.eps_raw), "squares": len(F.squares)}
    return _render(payload, rows, cfg, ["n", "order", "invariants"]), EXIT_OK


def cmd_chars(cfg: RunConfig) -> tuple[str, int]:
    R = _ring(cfg)
    n = max(cfg.m_hi, 1) if cfg.m_hi else 1
    ring = make_quad_ext(R) if cfg.family.startswith("u11") else R
    g = unit_group(ring, n)
    rows = [{"index": i, "label": u.label(), "order": u.order, "conductor": u.conductor}
            for i, u in enumerate(g.chars())]
    payload = {"q": R.q, "modulus": n, "group": "O_E^x" if ring is not R else "O^x"}
    return _render(payload, rows, cfg, ["index", "label", "order", "conductor"]), EXIT_OK


def cmd_dim_table(cfg: RunConfig) -> tuple[str, int]:
    cases = build_cases(cfg)
    towers = _towers(cfg)
    rows, ok = [], True
    for case in cases:
        for m in range(cfg.m_lo, cfg.m_hi + 1):
            for t in towers:
                formula = dim_formula(case.descriptor, m, t)
                brute = case.brute(m, t) if case.brute else None
                match = None if brute is None else brute == formula
                ok = ok and match is not False
                row = {"member": case.member, "m": m, "tower": t, "brute": brute, "formula": formula,
                       "match": match}
                if cfg.explain and case.explain is not None:
                    row["explain"] = case.explain(m, t)
                rows.append(row)
    info = conductor_formula(cases[0].descriptor)
    payload = {"family": cfg.canonical_family, "q": cfg.q, "conductor": info.conductor,
               "achieving_eta": info.achieving_eta, "all_match": ok}
    cols = ["member", "m", "tower", "brute", "formula", "match"]
    return _render(payload, rows, cfg, cols), EXIT_OK if ok else EXIT_MISMATCH


def _conductor_brute(cfg: RunConfig, case: FamilyCase):
    """(conductor, achieving eta labels, extra checks) by brute force, or None."""
    from .principal_series import eta_conductor_search, restrict_char_to_F

    fam = cfg.canonical_family
    R = _ring(cfg)
    m_max = max(cfg.m_hi, 2)
    if fam in ("unram-ps", "ram-ps", "ram-packet", "steinberg"):
        if fam == "unram-ps":
            chi = parse_char_literal(cfg.chi or "trivial", R, 0)
        elif fam == "ram-packet":
            chi = legendre_char(R, 1)
        elif fam == "steinberg":
            from .characters import abs_char
            chi = abs_char(R)
        else:
            chi = parse_char_literal(cfg.chi, R, cfg.cchi) if cfg.chi else choose_ram_chi(R, cfg.cchi, cfg.chi2_trivial)
        cs = eta_conductor_search(chi, "SL2", m_max, rep="steinberg" if fam == "steinberg" else "ps")
        extra = {}
        if fam == "ram-ps":
            g = unit_group(R, m_max)
            want = {chi.unit.lift_to(m_max), chi.unit.inverse().lift_to(m_max)}
            extra["achieving_is_chi_pm"] = set(cs.achieving) == want
            assert g is chi.unit.lift_to(m_max).group
        return cs.conductor, [e.label() for e in cs.achieving], extra
    if fam in ("u11-ps", "u11-exceptional"):
        chi = choose_u11_chi(R, cfg.cchi, exceptional=fam == "u11-exceptional")
        cs = eta_conductor_search(chi, "U11", m_max)
        E = make_quad_ext(R)
        u = chi.unit.lift_to(m_max)
        g = u.group
        sconj_inv = g.char_from_function(lambda x: u(E.conj(x)).inverse(), check=False)
        extra = {"achieving_is_chi_or_sconj_inv": set(cs.achieving) == {u, sconj_inv}}
        return cs.conductor, [e.label() for e in cs.achieving], extra
    if fam in ("sc-unram4", "sc-unram2"):
        data = level_one_data(R, fam == "sc-unram4")
        best, achieving = None, []
        for eta in admissible_etas(data):
            c_eta = None
            for m in range(0, m_max + 1):
                c2 = build_cases(cfg, eta_override=eta)[0]
                if any(c2.brute(m, t) for t in ("K", "Kp")):
                    c_eta = m
                    break
            if c_eta is not None and (best is None or c_eta < best):
                best, achieving = c_eta, [eta.label()]
            elif c_eta is not None and c_eta == best:
                achieving.append(eta.label())
        return best, achieving, {}
    return None


def cmd_conductor(cfg: RunConfig) -> tuple[str, int]:
    case = build_cases(cfg)[0]
    info = conductor_formula(case.descriptor)
    depth = depth_relations(case.descriptor)
    res = _conductor_brute(cfg, case)
    ok = True
    payload = {"family": cfg.canonical_family, "descriptor": case.descriptor.label(),
               "formula_conductor": info.conductor, "achieving_eta": info.achieving_eta,
               "newform_dim": info.newform_dim,
               "depth": None if depth.depth is None else str(depth.depth),
               "minimal_depth": None if depth.minimal_depth is None else str(depth.minimal_depth)}
    rows = []
    if res is not None:
        c, labels, extra = res
        payload["brute_conductor"] = c
        ok = c == info.conductor and all(extra.values())
        payload.update(extra)
        rows = [{"eta": lab, "achieves": True} for lab in labels]
    payload["match"] = ok
    return _render(payload, rows, cfg, ["eta", "achieves"]), EXIT_OK if ok else EXIT_MISMATCH


def _profile_names(profile: dict) -> list[str]:
    return [k for k in ("1", "eps", "pi", "eps*pi") if profile.get(k)]


def cmd_packet(cfg: RunConfig) -> tuple[str, int]:
    from .whittaker import genericity_profile

    cfg = replace(cfg, member="all")
    cases = build_cases(cfg)
    fam = cfg.canonical_family
    if len(cases) < 2:
        raise UsageError(f"{fam} is not a packet family")
    rows, ok = [], True
    for m in range(cfg.m_lo, cfg.m_hi + 1):
        for t in _towers(cfg):
            row = {"m": m, "tower": t}
            for case in cases:
                brute = case.brute(m, t) if case.brute else None
                formula = dim_formula(case.descriptor, m, t)
                row[f"{case.member}"] = formula if brute is None else brute
                if brute is not None and brute != formula:
                    ok = False
            rows.append(row)
    assignment = genericity_assignment(cases[0].descriptor)
    generic = {}
    for case in cases:
        if case.whittaker_space is not None:
            generic[case.member] = _profile_names(genericity_profile(case.whittaker_space()))
    if generic:
        for a, mem in assignment.items():
            for case in cases:
                is_gen = a in generic[case.member]
                if is_gen != (str(mem) == case.member):
                    ok = False
    payload = {"family": fam, "q": cfg.q, "assignment": {k: str(v) for k, v in assignment.items()},
               "generic_for": generic, "match": ok}
    if fam == "sc-unram4":
        data = level_one_data(_ring(cfg), True)
        payload["residue_generic_labels"] = data.generic_labels
    cols = ["m", "tower"] + [c.member for c in cases]
    return _render(payload, rows, cfg, cols), EXIT_OK if ok else EXIT_MISMATCH


def cmd_whittaker(cfg: RunConfig) -> tuple[str, int]:
    from .whittaker import scalings, whittaker_value

    cases = build_cases(cfg)
    R = _ring(cfg)
    sc = scalings(R)
    names = [cfg.scaling] if cfg.scaling else ["1"]
    if any(n not in sc for n in names):
        raise UsageError(f"scaling must be one of {sorted(sc)}")
    rows = []
    for case in cases:
        if case.whittaker_space is None:
            raise UsageError(f"no finite model for {case.descriptor.label()}")
        space = case.whittaker_space()
        for i, v in enumerate(space.basis):
            for n in names:
                w = whittaker_value(v, sc[n], space.transported)
                rows.append({"member": case.member, "vector": i, "scaling": n, "value": fmt_value(w.value),
                             "radius": w.radius})
    payload = {"family": cfg.canonical_family, "q": cfg.q}
    return _render(payload, rows, cfg, ["member", "vector", "scaling", "value", "radius"]), EXIT_OK


# ---------------------------------------------------------------------------
# verify harness


def _cell(name: str, passed: bool, **detail) -> dict:
    return {"name": name, "pass": bool(passed), **{k: v for k, v in detail.items()}}


def _table_cells(cfg: RunConfig, m_range, towers=("K", "Kp")) -> list[dict]:
    out = []
    for case in build_cases(replace(cfg, member="all")):
        for m in m_range:
            for t in towers:
                if case.brute is None:
                    continue
                b = case.brute(m, t)
                if b is None:
                    continue
                f = dim_formula(case.descriptor, m, t)
                out.append(_cell(f"{case.descriptor.label()} m={m} {t}", b == f, brute=b, formula=f))
    return out


def suite_principal_series(cfg: RunConfig) -> list[dict]:
    cells = []
    ms = range(0, cfg.m_hi + 1)
    cells += _table_cells(replace(cfg, family="unram-ps"), ms)
    cells += _table_cells(replace(cfg, family="steinberg"), ms, ("K",))
    for flag in (False, True):
        try:
            c2 = replace(cfg, family="ram-ps", cchi=1, chi2_trivial=flag)
            choose_ram_chi(_ring(c2), 1, flag)
        except UsageError:
            continue
        cells += _table_cells(c2, ms)
        out, code = cmd_conductor(replace(c2, format="json"))
        cells.append(_cell(f"ram-ps chi2_trivial={flag} conductor", code == EXIT_OK))
    return cells


def suite_packets(cfg: RunConfig) -> list[dict]:
    ms = range(0, cfg.m_hi + 1)
    cells = _table_cells(replace(cfg, family="ram-packet"), ms)
    cells += _table_cells(replace(cfg, family="unram-packet"), ms)
    return cells


def _u11_cap(cfg: RunConfig, at_q3: int) -> int:
    """Unitary models grow like q^{4m}; keep q > 3 to m <= 1."""
    return min(cfg.m_hi, at_q3 if cfg.q <= 3 else 1)


def suite_u11(cfg: RunConfig) -> list[dict]:
    ms = range(0, _u11_cap(cfg, 3) + 1)
    cells = []
    for c in (0, 1):
        cells += _table_cells(replace(cfg, family="u11-ps", cchi=c), ms)
    cells += _table_cells(replace(cfg, family="u11-exceptional"), ms)
    cells += _table_cells(replace(cfg, family="u11-packet"), ms)
    for fam, c in (("u11-ps", 1), ("u11-exceptional", 0)):
        _, code = cmd_conductor(replace(cfg, family=fam, cchi=c, format="json", m_hi=_u11_cap(cfg, 2)))
        cells.append(_cell(f"{fam} conductor and achieving set", code == EXIT_OK))
    return cells


def suite_theta(cfg: RunConfig) -> list[dict]:
    from .principal_series import theta_criterion_space

    R = _ring(cfg)
    E = make_quad_ext(R)
    cells = []
    configs = [("u11-ps c=0", choose_u11_chi(R, 0), None), ("u11-ps c=1", choose_u11_chi(R, 1), None),
               ("u11-exceptional", choose_u11_chi(R, 0, exceptional=True), None),
               ("u11-packet", unramified_char(E, RootOfUnity(2, 1)), None)]
    for name, chi, _ in configs:
        eta = chi.unit if chi.unit.conductor else unit_group(E, 1).chars()[0]
        for m in range(0, _u11_cap(cfg, 2) + 1):
            try:
                tc = theta_criterion_space(chi, eta, m)
                cells.append(_cell(f"{name} m={m}", tc.equal, dim=tc.direct_space.dim))
            except AssertionError as exc:
                cells.append(_cell(f"{name} m={m}", False, error=str(exc)))
    return cells


def suite_whittaker(cfg: RunConfig) -> list[dict]:
    from .whittaker import genericity_profile, kernel_quotient_dim, whittaker_value

    cells = []
    R = _ring(cfg)
    for lit in ("trivial", "unramified:zeta=4:1", "unramified:zeta=3:1"):
        chi = parse_char_literal(lit, R, 0)
        case = build_cases(replace(cfg, family="unram-ps", chi=lit))[0]
        v = whittaker_value(case.whittaker_space().basis[0]).value
        want = QHalfGraded(R.q, 1 - chi.at_pi.to_cyclotomic() * Fraction(1, R.q))
        cells.append(_cell(f"unram-ps {lit}: L(1,chi)^-1", v == want, value=fmt_value(v)))
    st = build_cases(replace(cfg, family="steinberg"))[0].whittaker_space()
    cells.append(_cell("steinberg psi-generic on K_1", genericity_profile(st)["1"]))
    for flag in (False, True):
        try:
            choose_ram_chi(R, 1, flag)
        except UsageError:
            continue
        sp = build_cases(replace(cfg, family="ram-ps", cchi=1, chi2_trivial=flag))[0].whittaker_space()
        if not flag:
            cells.append(_cell("ram-ps newform one-dimensional", sp.dim == 1))
        cells.append(_cell(f"ram-ps chi2_trivial={flag} psi-generic newforms", genericity_profile(sp)["1"]))
    for fam in ("ram-packet", "unram-packet", "u11-packet"):
        _, code = cmd_packet(replace(cfg, family=fam, m_lo=0, m_hi=1, format="json"))
        cells.append(_cell(f"{fam} genericity assignment", code == EXIT_OK))
    ex = build_cases(replace(cfg, family="u11-exceptional"))[0].whittaker_space()
    cells.append(_cell("u11-exceptional newform dim 2", ex.dim == 2))
    cells.append(_cell("u11-exceptional Lambda_psi kernel dim 1", kernel_quotient_dim(ex) == 1))
    gen = build_cases(replace(cfg, family="u11-ps", cchi=1))[0].whittaker_space()
    cells.append(_cell("u11-ps psi-generic newform", genericity_profile(gen)["1"]))
    return cells


def suite_supercuspidal(cfg: RunConfig) -> list[dict]:
    cells = []
    R = _ring(replace(cfg, m_hi=max(cfg.m_hi, 4)))
    for fam in ("sc-unram4", "sc-unram2"):
        data = level_one_data(R, fam == "sc-unram4")
        for eta in admissible_etas(data):
            c2 = replace(cfg, family=fam, member="all", m_hi=max(cfg.m_hi, 4))
            for case in build_cases(c2, eta_override=eta):
                for m in range(1, 5):
                    for t in ("K", "Kp"):
                        b, f = case.brute(m, t), dim_formula(case.descriptor, m, t)
                        cells.append(_cell(f"{case.descriptor.label()} eta={eta.label()} m={m} {t}", b == f,
                                           brute=b, formula=f))
    return cells


def suite_formulas(cfg: RunConfig) -> list[dict]:
    cells = []
    for d in descriptor_sweep(3, 3):
        c = conductor_formula(d).conductor
        cells.append(_cell(f"{d.label()} first non-zero row", first_nonzero(d, 8) == c))
        dr = depth_relations(d)
        if dr.conductor_equal is not None:
            cells.append(_cell(f"{d.label()} U11/SL2 conductor", dr.conductor_equal))
    return cells


SUITES = {
    "principal-series": suite_principal_series,
    "packets": suite_packets,
    "u11": suite_u11,
    "theta-crosscheck": suite_theta,
    "whittaker": suite_whittaker,
    "supercuspidal": suite_supercuspidal,
    "formulas": suite_formulas,
}


def run_suite(cfg: RunConfig) -> dict:
    names = list(SUITES) if cfg.suite == "all" else [cfg.suite]
    report = {}
    for n in names:
        if n not in SUITES:
            raise UsageError(f"unknown suite {n!r}; choose from {sorted(SUITES)} or all")
        report[n] = SUITES[n](cfg)
    return report


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    report = run_suite(cfg)
    failed = sum(not c["pass"] for cells in report.values() for c in cells)
    passed = sum(c["pass"] for cells in report.values() for c in cells)
    summary = {"q": cfg.q, "passed": passed, "failed": failed, "suites": report}
    if cfg.format == "json":
        text = json.dumps(summary, sort_keys=True, indent=2) + "\n"
    else:
        rows = [{"suite": s, "cell": c["name"], "pass": c["pass"]} for s, cells in report.items() for c in cells]
        text = _render({"q": cfg.q, "passed": passed, "failed": failed}, rows, cfg, ["suite", "cell", "pass"])
    return text, EXIT_OK if failed == 0 else EXIT_MISMATCH


COMMANDS = {
    "ring-info": cmd_ring_info,
    "chars": cmd_chars,
    "dim-table": cmd_dim_table,
    "conductor": cmd_conductor,
    "packet": cmd_packet,
    "whittaker": cmd_whittaker,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="newformlab", description="Newform dimensions for SL2 and U(1,1) over p-adic fields.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="key=value file; command-line flags take precedence")
    p.add_argument("--backend", choices=["mixed", "equal"])
    p.add_argument("--q", type=int, help="residue field size (prime power)")
    p.add_argument("--p", type=int)
    p.add_argument("--f", type=int)
    p.add_argument("--N", type=int, help="ring precision (default: from the m-range)")
    p.add_argument("--family")
    p.add_argument("--chi", help="character literal: trivial, unramified:zeta=M:a, legendre, table:<i>")
    p.add_argument("--cchi", type=int, help="conductor of the inducing character")
    p.add_argument("--chi2-trivial", dest="chi2_trivial", action="store_const", const=True)
    p.add_argument("--l", type=int, help="level of a supercuspidal descriptor")
    p.add_argument("--rho0", help="minimal depth of a U(1,1) supercuspidal descriptor")
    p.add_argument("--member", help="packet member, or 'all'")
    p.add_argument("--m", help="level or range lo..hi")
    p.add_argument("--max-m", dest="max_m", type=int)
    p.add_argument("--tower", choices=["K", "Kp", "both"])
    p.add_argument("--format", choices=["json", "csv", "md"])
    p.add_argument("--explain", action="store_const", const=True)
    p.add_argument("--suite")
    p.add_argument("--scaling", help="square class for psi_a: 1, eps, pi, eps*pi")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    pairs: dict[str, str] = {}
    if ns.config:
        try:
            with open(ns.config) as fh:
                pairs.update(_parse_pairs(fh.read()))
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
    values = _coerce_pairs(pairs)
    flags = {k: v for k, v in vars(ns).items() if v is not None and k not in ("command", "config")}
    if "q" in flags:
        values.update(_split_q(flags.pop("q")))
    if "m" in flags:
        values["m_lo"], values["m_hi"] = _parse_range(flags.pop("m"))
    if "max_m" in flags:
        values["m_lo"], values["m_hi"] = 0, flags.pop("max_m")
    values.update(flags)
    if values.get("f", 1) > 1 and "backend" not in flags:
        values["backend"] = "equal"
    return RunConfig(**values)


def main(argv: list[str] | None = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        cfg = config_from_args(ns)
        text, code = COMMANDS[ns.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MemoryError, PrecisionError) as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())

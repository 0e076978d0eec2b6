"""Brute-force reference evaluation of one explicit deployment.

Written with plain floats and loops and shares no code with src.model, so
agreement with the vectorised pipeline means something.

Fixture text format:

    # provenance comment
    param eta=0.7
    user 0 1
    tx macro 10 0
    tx ongrid 2 0
    tx offgrid 0 0
    association nearest_any
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

FIXTURE_DIR = Path(__file__).parent / "fixtures"

KINDS = ("macro", "ongrid", "offgrid")

DEFAULTS = {
    "p_m_dbm": 40.0,
    "p_s_dbm": 23.0,
    "eta": 0.7,
    "n0_dbm": -120.0,
    "theta_t_db": 5.0,
    "p_eps_dbm": 6.0,
    "alpha_near": 2.0,
    "alpha_far": 4.0,
    "d_c_m": 4.0,
}


@dataclass
class Transmitter:
    kind: str
    x: float
    y: float


@dataclass
class Fixture:
    params: dict[str, float] = field(default_factory=dict)
    user: tuple[float, float] = (0.0, 0.0)
    transmitters: list[Transmitter] = field(default_factory=list)
    association: str = "nearest_any"
    notes: list[str] = field(default_factory=list)

    def value(self, key: str) -> float:
        return self.params.get(key, DEFAULTS[key])


def parse_fixture(text: str) -> Fixture:
    fixture = Fixture()
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            fixture.notes.append(line[1:].strip())
            continue
        words = line.split()
        if words[0] == "param":
            key, value = words[1].split("=")
            fixture.params[key] = float(value)
        elif words[0] == "user":
            fixture.user = (float(words[1]), float(words[2]))
        elif words[0] == "tx":
            assert words[1] in KINDS, words[1]
            fixture.transmitters.append(
                Transmitter(words[1], float(words[2]), float(words[3]))
            )
        elif words[0] == "association":
            fixture.association = words[1]
        else:
            raise ValueError(f"bad fixture line: {line!r}")
    assert len(fixture.transmitters) <= 10
    return fixture


def load_fixture(name: str) -> Fixture:
    return parse_fixture((FIXTURE_DIR / name).read_text(encoding="utf-8"))


def watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def gain(fixture: Fixture, ax: float, ay: float, bx: float, by: float) -> float:
    d = math.sqrt((ax - bx) ** 2 + (ay - by) ** 2)
    if d > fixture.value("d_c_m"):
        return d ** (-fixture.value("alpha_far"))
    return d ** (-fixture.value("alpha_near"))


def oracle_powers(fixture: Fixture) -> list[float]:
    """Transmit power of every transmitter, in fixture order."""
    ps = watts(fixture.value("p_s_dbm"))
    pm = watts(fixture.value("p_m_dbm"))
    powers = []
    for tx in fixture.transmitters:
        if tx.kind == "macro":
            powers.append(pm)
        elif tx.kind == "ongrid":
            powers.append(ps)
        else:
            collected = 0.0
            for source in fixture.transmitters:
                if source.kind == "ongrid":
                    collected += ps * gain(fixture, tx.x, tx.y, source.x, source.y)
                elif source.kind == "macro":
                    collected += pm * gain(fixture, tx.x, tx.y, source.x, source.y)
            powers.append(min(ps, fixture.value("eta") * collected))
    return powers


def oracle_serving(fixture: Fixture) -> Optional[int]:
    """Fixture index of the serving SBS, None when nobody may serve."""
    allowed = ("offgrid",) if fixture.association == "offgrid_only" else ("ongrid", "offgrid")
    ux, uy = fixture.user
    best = None
    best_key = None
    for i, tx in enumerate(fixture.transmitters):
        if tx.kind not in allowed:
            continue
        d = math.sqrt((tx.x - ux) ** 2 + (tx.y - uy) ** 2)
        # on-grid wins exact ties, then fixture order within a class
        key = (d, 0 if tx.kind == "ongrid" else 1)
        if best_key is None or key < best_key:
            best, best_key = i, key
    return best


def oracle_sinr(fixture: Fixture) -> float:
    powers = oracle_powers(fixture)
    server = oracle_serving(fixture)
    if server is None:
        return 0.0
    ux, uy = fixture.user
    interference = 0.0
    for i, tx in enumerate(fixture.transmitters):
        if i != server:
            interference += powers[i] * gain(fixture, ux, uy, tx.x, tx.y)
    serving = fixture.transmitters[server]
    if powers[server] == 0.0:
        return 0.0
    received = powers[server] * gain(fixture, ux, uy, serving.x, serving.y)
    return received / (interference + watts(fixture.value("n0_dbm")))


def efficiency(sinr: float, kind: Optional[str], fixture: Fixture) -> float:
    if kind is None:
        return 0.0
    p_eps = watts(fixture.value("p_eps_dbm"))
    spent = watts(fixture.value("p_s_dbm")) + p_eps if kind == "ongrid" else p_eps
    return math.log1p(sinr) / math.log(2.0) / spent


def oracle_ee(fixture: Fixture) -> float:
    server = oracle_serving(fixture)
    kind = None if server is None else fixture.transmitters[server].kind
    return efficiency(oracle_sinr(fixture), kind, fixture)

import hashlib
import json
import random

import pytest

from fatnielsen.diagram import basepoint_diagram, diagram_from_automorphism, is_basepoint
from fatnielsen.errors import BoundaryNotFixed, IdentityImage, ParseError, ShapeRecurrenceTimeout
from fatnielsen.factor import (
    Automorphism,
    Certificate,
    compose,
    factor,
    identity,
    random_mapping_class,
    random_walk,
    replay_slides,
    validate_automorphism,
    verify,
)
from fatnielsen.freegroup import Basepoint, parse_word
from fatnielsen.reduction import ReductionTrace, Strategy
from fatnielsen.slides import L, R, Slide, SlideRecord

G1 = Basepoint.standard(1)


def images1(a, b):
    return {1: parse_word(a, 1), 2: parse_word(b, 1)}


TWIST = validate_automorphism(images1("a", "b a"), G1)


def test_validate_examples():
    assert TWIST.images == (parse_word("a", 1), parse_word("b a", 1))
    assert validate_automorphism(images1("a", "b"), G1) == identity(1)
    with pytest.raises(BoundaryNotFixed):
        validate_automorphism(images1("b", "a"), G1)
    with pytest.raises(BoundaryNotFixed):
        validate_automorphism(images1("a", "b b"), G1)
    with pytest.raises(IdentityImage):
        validate_automorphism(images1("a", ""), G1)


def test_factor_identity_and_twist():
    assert factor(identity(1)).trace.slides == []
    cert = factor(TWIST)
    assert [r.slide for r in cert.trace.slides] == [Slide(2, R)]
    assert cert.trace.energies == [36, 10]
    assert verify(cert)


def test_verify_rejects_flipped_slide():
    cert = factor(TWIST)
    rec = cert.trace.slides[0]
    bad = ReductionTrace(cert.trace.strategy, [SlideRecord(Slide(2, L), rec.landing_position, rec.energy_after)],
                         list(cert.trace.energies))
    verdict = verify(Certificate(TWIST, G1, bad))
    assert not verdict and verdict.reason


def test_verify_rejects_empty_trace_off_basepoint():
    verdict = verify(Certificate(TWIST, G1, ReductionTrace(Strategy.EXHAUSTIVE, [], [36])))
    assert not verdict
    assert "basepoint" in verdict.reason


def test_verify_rejects_wrong_energies():
    cert = factor(TWIST)
    rec = cert.trace.slides[0]
    wrong = ReductionTrace(cert.trace.strategy, [SlideRecord(rec.slide, rec.landing_position, 11)], [36, 11])
    assert not verify(Certificate(TWIST, G1, wrong))
    assert not verify(Certificate(TWIST, G1, ReductionTrace(Strategy.EXHAUSTIVE, [rec], [35, 10])))


def test_certificate_round_trip_and_digest():
    cert = factor(random_mapping_class(2, 15, seed=3), strategy="guided")
    text = cert.dumps()
    again = Certificate.loads(text)
    assert again.dumps() == text
    assert verify(again)
    lines = text.splitlines()
    with pytest.raises(ParseError):
        Certificate.loads("\n".join(lines[:-2] + lines[-1:]) + "\n")
    with pytest.raises(ParseError):
        Certificate.loads("\n".join(lines[:-1]) + "\n")
    flipped = lines[3].replace('"R"', '"X"').replace('"L"', '"R"').replace('"X"', '"L"')
    with pytest.raises(ParseError, match="digest"):
        Certificate.loads("\n".join(lines[:3] + [flipped] + lines[4:]) + "\n")


def test_resigned_tampered_certificate_fails_verification():
    cert = factor(TWIST)
    lines = cert.lines()
    rec = json.loads(lines[3])
    rec["dir"] = "L"
    lines[3] = json.dumps(rec, sort_keys=True)
    body = "".join(line + "\n" for line in lines)
    text = body + json.dumps({"digest": "sha256:" + hashlib.sha256(body.encode()).hexdigest()}) + "\n"
    assert not verify(Certificate.loads(text))


def test_automorphism_file_round_trip():
    phi = random_mapping_class(3, 10, seed=1)
    assert Automorphism.from_json(phi.to_json()) == phi
    with pytest.raises(ParseError):
        Automorphism.from_json('{"genus": 1, "images": {"a": "a"}}')
    with pytest.raises(ParseError):
        Automorphism.from_json('{"genus": 1, "images": {"a": "a", "B": "b"}}')
    with pytest.raises(BoundaryNotFixed):
        Automorphism.from_json('{"genus": 1, "images": {"a": "b", "b": "a"}}')


def test_random_genus_one_walk_is_the_whole_walk():
    for seed in range(20):
        rng = random.Random(f"{seed}:0")
        d = random_walk(G1, 9, rng)
        assert random_mapping_class(1, 9, seed).images == tuple(
            d.labels[G1.sigma.index(i)] for i in (1, 2))


def test_walk_length_zero_is_identity():
    for g in (1, 2, 3):
        assert random_mapping_class(g, 0, seed=5) == identity(g)


def test_random_mapping_class_is_deterministic():
    assert random_mapping_class(3, 20, seed=8) == random_mapping_class(3, 20, seed=8)
    assert random_mapping_class(3, 20, seed=8) != random_mapping_class(3, 20, seed=9)


def test_genus_two_thousand_walks_verify():
    base = Basepoint.standard(2)
    for seed in range(1000):
        phi = random_mapping_class(2, seed % 31, seed)
        assert verify(factor(phi, base)), seed


def test_plain_recurrence_walks():
    for g in (1, 2):
        for seed in range(10):
            phi = random_mapping_class(g, 6, seed, homing=False, max_steps=60, attempts=50)
            assert verify(factor(phi))
    with pytest.raises(ShapeRecurrenceTimeout):
        random_mapping_class(3, 5, seed=8, homing=False, max_steps=5, attempts=3)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_both_strategies_verify(g):
    for seed in range(40):
        phi = random_mapping_class(g, 25, seed)
        for strategy in Strategy:
            cert = factor(phi, strategy=strategy)
            assert verify(cert)
            assert cert.dumps() == factor(phi, strategy=strategy).dumps()


@pytest.mark.parametrize("g", [1, 2])
def test_traces_compose(g):
    base = Basepoint.standard(g)
    for seed in range(25):
        phi = random_mapping_class(g, 12, seed)
        psi = random_mapping_class(g, 12, seed + 1000)
        both = compose(phi, psi)
        cert_both = factor(both)
        assert verify(cert_both)
        # psi's slides carry G_{phi psi} to G_phi, then phi's slides finish the job
        d = diagram_from_automorphism(both.images, base)
        d = replay_slides(d, [r.slide for r in factor(psi).trace.slides])
        assert d == diagram_from_automorphism(phi.images, base)
        d = replay_slides(d, [r.slide for r in factor(phi).trace.slides])
        assert is_basepoint(d)


def test_nonstandard_basepoint():
    base = Basepoint(2, parse_word("a2 b2 A2 B2 a1 b1 A1 B1", 2))
    for seed in range(20):
        phi = random_mapping_class(2, 15, seed, base=base)
        cert = factor(phi, base, Strategy.GUIDED)
        assert verify(cert)
        assert Certificate.loads(cert.dumps()).base == base
    assert basepoint_diagram(base).total_energy == 36

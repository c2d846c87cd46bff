import copy
import json
import random
from fractions import Fraction

import pytest

from conftest import as_fractions, to_space
from macrospace import (
    KappaSpec,
    baire_equivalence,
    embed_baire,
    find_level_schedule,
    gen_kappa_space,
    line_space,
    surjection_onto,
    verify_certificate,
)
from macrospace.constructions import ScaleSchedule, squares_space
from macrospace.errors import (
    CertificateError,
    InputError,
    InsufficientCapacity,
    MacroConnectedSource,
    NotHomogeneousAtSchedule,
)
from macrospace.serialize import dumps
import oracles

K33 = gen_kappa_space(KappaSpec(3, 3))


def roundtrip(cert):
    return json.loads(dumps(cert.to_json()))


class TestSchedule:
    def test_ternary(self):
        assert find_level_schedule(K33, 3, 3).values == (1, 2, 3)

    def test_binary_lacks_width_three(self):
        # cov at scale 1 of the scale-3 ball is 4, so the first step succeeds at 3
        words, dist = oracles.kappa_distances(2, 3)
        assert oracles.capacity(dist, Fraction(1), Fraction(3)) == (4, 4)
        assert oracles.capacity(dist, Fraction(1), Fraction(2)) == (2, 2)
        with pytest.raises(InsufficientCapacity) as exc:
            find_level_schedule(gen_kappa_space(KappaSpec(2, 3)), 3, 3)
        assert exc.value.detail["step"] == 2 and exc.value.detail["achieved_depth"] == 2

    def test_width_one_takes_sorted_values(self):
        s = line_space([0, 1, 3, 7])
        assert find_level_schedule(s, 1, 3).values == tuple(s.distance_values()[:3])

    def test_gap(self):
        assert find_level_schedule(K33, 3, 2, gap=1).values == (1, 3)

    def test_separation_flags(self):
        assert ScaleSchedule((1, 7, 40), "separation_schedule").gap_ok == (True, False)

    def test_bad_args(self):
        with pytest.raises(InputError):
            find_level_schedule(K33, 3, 0)


class TestEquivalence:
    def test_ternary_isometry(self):
        cert = baire_equivalence(K33, 3, 3)
        phi = cert.multimap
        assert phi.is_bijective
        assert phi.target == gen_kappa_space(KappaSpec(3, 3, (1, 2, 3)))
        assert oracles.is_isometry(phi.sorted_pairs(), as_fractions(K33), as_fractions(phi.target))
        assert all(cert.mesh_ok)
        verify_certificate(roundtrip(cert))

    def test_fat_and_thin_branch(self):
        # clusters of sizes 3, 3, 2 at internal distance 1, pairwise 2 apart
        sizes = [3, 3, 2]
        owner = [c for c, n in enumerate(sizes) for _ in range(n)]
        d = [[0 if i == j else (1 if owner[i] == owner[j] else 2) for j in range(8)] for i in range(8)]
        with pytest.raises(NotHomogeneousAtSchedule) as exc:
            baire_equivalence(to_space(d), 3, 2)
        assert exc.value.detail["degrees"] == [2, 3]

    def test_width_one_point(self):
        cert = baire_equivalence(line_space([0]), 1, 1)
        assert cert.multimap.pairs == {(0, 0)}
        verify_certificate(roundtrip(cert))

    def test_shuffled_copy(self):
        r = random.Random(4)
        perm = list(range(27))
        r.shuffle(perm)
        cert = baire_equivalence(K33.subspace(perm), 3, 3)
        assert cert.multimap.is_bijective
        verify_certificate(roundtrip(cert))


class TestEmbedding:
    SPACE = gen_kappa_space(KappaSpec(3, 3, (7, 49, 343)))

    def test_scheduled_ternary(self):
        cert = embed_baire(self.SPACE, 3, 2)
        assert cert.injective and len(cert.multimap.pairs) == 9
        assert cert.schedule.values == (7, 49, 343)
        assert [s[:3] for s in cert.separation] == [(1, 21, 21), (2, 49, 147)]
        assert cert.radius == 392 and cert.max_distance <= cert.radius
        verify_certificate(roundtrip(cert))

    def test_binary_lacks_width_three(self):
        with pytest.raises(InsufficientCapacity) as exc:
            embed_baire(gen_kappa_space(KappaSpec(2, 5)), 3, 2)
        assert exc.value.detail["step"] == 1

    def test_depth_zero(self):
        cert = embed_baire(self.SPACE, 3, 0, base_point=5)
        assert cert.multimap.pairs == {(0, 5)}
        verify_certificate(roundtrip(cert))

    def test_base_point(self):
        cert = embed_baire(self.SPACE, 3, 2, base_point=4)
        assert cert.multimap.as_function()[0] == 4
        verify_certificate(roundtrip(cert))


class TestSurjection:
    LINE = line_space([7, 49, 343, 2401])

    def test_line_onto_three_points(self):
        target = to_space([[0, 2, 3], [2, 0, 4], [3, 4, 0]])
        cert = surjection_onto(self.LINE, target)
        phi = cert.multimap
        assert phi.is_total and phi.is_surjective
        assert cert.chain == (0, 2, 3) and cert.psi == (1, 1, 2, 3)
        verify_certificate(roundtrip(cert))

    def test_binary_source(self):
        cert = surjection_onto(gen_kappa_space(KappaSpec(2, 2)), line_space([0, 5]))
        assert cert.multimap.is_surjective and cert.multimap.is_total

    def test_one_point_target(self):
        cert = surjection_onto(self.LINE, line_space([0]))
        assert cert.multimap.pairs == {(i, 0) for i in range(4)}
        assert set(cert.oscillation_fwd.values) == {0}

    def test_connected_source(self):
        with pytest.raises(MacroConnectedSource):
            surjection_onto(line_space([0]), line_space([0, 1]))

    def test_squares(self):
        assert squares_space(3).labels == (1, 4, 9)


# -- certificate mutations ----------------------------------------------------


def _certificates():
    target = to_space([[0, 2, 3], [2, 0, 4], [3, 4, 0]])
    return {
        "equiv": roundtrip(baire_equivalence(K33, 3, 3)),
        "embed": roundtrip(embed_baire(TestEmbedding.SPACE, 3, 2)),
        "surject": roundtrip(surjection_onto(TestSurjection.LINE, target)),
    }


CERTS = _certificates()


def _bump(value):
    return str(Fraction(value) + 1) if not isinstance(value, int) else value + 1


MUTATIONS = {
    "drop_pair": lambda c: c["multimap"]["pairs"].pop(),
    "bump_schedule": lambda c: c.__setitem__(
        "schedule" if "schedule" in c else "chain_scales",
        [_bump(v) for v in c.get("schedule", c.get("chain_scales"))],
    ),
    "bump_table": lambda c: c["oscillation_fwd"][-1].__setitem__(1, _bump(c["oscillation_fwd"][-1][1])),
    "bad_format": lambda c: c.__setitem__("format", "other"),
}


@pytest.mark.parametrize("kind", sorted(CERTS))
@pytest.mark.parametrize("mutation", sorted(MUTATIONS))
def test_single_mutation_rejected(kind, mutation):
    data = copy.deepcopy(CERTS[kind])
    MUTATIONS[mutation](data)
    with pytest.raises(CertificateError):
        verify_certificate(data)


def test_dropped_pair_code():
    data = copy.deepcopy(CERTS["equiv"])
    data["multimap"]["pairs"].pop(0)
    with pytest.raises(CertificateError) as exc:
        verify_certificate(data)
    assert exc.value.code == "SurjectivityViolated"


def test_embedding_separation_tamper():
    data = copy.deepcopy(CERTS["embed"])
    data["separation"][0]["min_distance"] = 1000
    with pytest.raises(CertificateError) as exc:
        verify_certificate(data)
    assert exc.value.code == "SeparationViolated"


def test_surjection_chain_tamper():
    data = copy.deepcopy(CERTS["surject"])
    data["chain"] = [0, 1, 3]
    with pytest.raises(CertificateError):
        verify_certificate(data)


def test_certificates_deterministic():
    again = _certificates()
    assert {k: dumps(v) for k, v in again.items()} == {k: dumps(v) for k, v in CERTS.items()}

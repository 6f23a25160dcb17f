import numpy as np
import pytest

from congruence_lab.polyalg import (
    MultiPoly,
    ProjLine,
    ProjPoint,
    binary_gcd_degree,
    is_squarefree,
    restrict_to_line,
    restrict_to_plane,
)
from congruence_lab.surfaces import (
    EXPECTED_ORDER,
    ConstructionError,
    SurfaceModel,
    bordiga_from_matrix,
    bordiga_with_parasitic_plane,
    build_family,
    catalecticant,
    delpezzo_projection,
    hilbert_function,
    implicitize,
    random_bordiga,
    random_linear_form,
    random_plane,
    ruling_line,
    scroll_projection,
    section_degree,
    vanishes_on_parametrization,
    veronese_parametrization,
    veronese_projection,
    zak_bordiga,
)

PRIMES = (101, 131)
SECTION_DEGREE = {
    "bordiga": 6,
    "zak": 6,
    "veronese": 4,
    "veronese-degenerate": 4,
    "quartic-scroll": 4,
    "delpezzo": 5,
    "scroll14": 5,
    "scroll23": 5,
}
GENERATORS = {
    # (count, degree) at seed 0; the counts are dimensions of spaces of forms
    "bordiga": (4, 3),
    "zak": (4, 3),
    "veronese": (7, 3),
    "veronese-degenerate": (2, 2),
    "quartic-scroll": (8, 3),
    "delpezzo": (5, 3),
    "scroll14": (18, 4),
    "scroll23": (18, 4),
}


@pytest.fixture(scope="module")
def models():
    return {(f, q): build_family(f, q, 0) for f in EXPECTED_ORDER for q in PRIMES}


@pytest.mark.parametrize("q", PRIMES)
@pytest.mark.parametrize("family", list(EXPECTED_ORDER))
def test_generators(models, family, q):
    model = models[family, q]
    count, degree = GENERATORS[family]
    assert model.degree == degree
    assert len(model.generators) == count
    assert all(g.is_homogeneous() for g in model.generators)


@pytest.mark.parametrize("q", PRIMES)
@pytest.mark.parametrize("family", list(EXPECTED_ORDER))
def test_plane_section_degree(models, family, q):
    rng = np.random.default_rng(q)
    model = models[family, q]
    degrees = [section_degree(model, random_plane(rng, 4, q)) for _ in range(3)]
    assert degrees.count(SECTION_DEGREE[family]) >= 2, degrees


@pytest.mark.parametrize("family", [f for f in EXPECTED_ORDER if f not in ("bordiga", "zak")])
def test_generators_vanish_on_image(models, family):
    for q in PRIMES:
        assert vanishes_on_parametrization(models[family, q], np.random.default_rng(7), count=200)


@pytest.mark.parametrize("family", ["bordiga", "veronese", "delpezzo", "scroll23"])
def test_construction_is_deterministic(family):
    assert build_family(family, 101, 3).to_json() == build_family(family, 101, 3).to_json()
    assert build_family(family, 101, 3).to_json() != build_family(family, 101, 4).to_json()


@pytest.mark.parametrize("family", list(EXPECTED_ORDER))
def test_json_round_trip(models, family):
    model = models[family, 101]
    text = model.to_json()
    back = SurfaceModel.from_json(text)
    assert back == model
    assert back.to_json() == text
    assert back.meta == model.meta


def test_json_rejects_other_schema(models):
    d = models["bordiga", 101].to_dict()
    d["schema"] = "v0"
    with pytest.raises(ValueError):
        SurfaceModel.from_dict(d)


def test_model_validation():
    q = 101
    x = [MultiPoly.variable(i, 5, q) for i in range(5)]
    with pytest.raises(ValueError):
        SurfaceModel(4, q, (x[0] ** 2, x[1] ** 3), "bordiga")
    with pytest.raises(ValueError):
        SurfaceModel(4, q, (x[0] ** 2 + x[1],), "bordiga")
    with pytest.raises(ValueError):
        SurfaceModel(4, q, (), "bordiga")


def test_bordiga_cone_rejected():
    q = 101
    rng = np.random.default_rng(0)
    ell = random_linear_form(rng, 5, q)
    M = [[ell * int(rng.integers(1, q)) for _ in range(4)] for _ in range(3)]
    with pytest.raises(ValueError):
        bordiga_from_matrix(M, q, rng)


def test_bordiga_zero_minors_rejected():
    q = 101
    x = [MultiPoly.variable(i, 5, q) for i in range(5)]
    zero = MultiPoly.zero(5, q)
    M = [[x[0], x[1], x[2], x[3]], [x[0] * 2, x[1] * 2, x[2] * 2, x[3] * 2], [x[4], zero, zero, zero]]
    with pytest.raises(ConstructionError):
        bordiga_from_matrix(M, q)


@pytest.mark.parametrize("q", PRIMES)
def test_parasitic_plane_section(q):
    model, plane = bordiga_with_parasitic_plane(q, 0)
    # a curve component: the Hilbert function never stabilizes at a finite length
    assert section_degree(model, plane) is None
    assert len(model.generators) == 4
    assert plane.matrix() == [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]]


def test_zak_singular_parameters():
    model = zak_bordiga(101, 0)
    quintic = model.meta["singular_parameter_polynomial"]
    assert len(quintic) - 1 == 5
    assert is_squarefree(quintic, 101)
    assert model.provenance == "zak"
    # every point of the curve (1, s, ..., s^5) on the hyperplane is a point of the surface
    for s in range(101):
        if sum(ci * s**i for i, ci in enumerate(quintic)) % 101 == 0:
            assert model.contains(tuple(pow(s, i, 101) for i in range(5)))


def test_catalecticant_shape():
    m = catalecticant(101)
    assert len(m) == 3 and len(m[0]) == 4
    assert m[1][0] == m[0][1]


@pytest.mark.parametrize("q", PRIMES)
def test_veronese_implicitization_counts(q):
    rng = np.random.default_rng(0)
    assert len(implicitize(veronese_parametrization(q), 2, q, rng)) == 6
    generic = veronese_projection(q, 0)
    degenerate = veronese_projection(q, 0, degenerate=True)
    assert implicitize(generic.parametrization, 2, q, rng) == []
    assert len(implicitize(degenerate.parametrization, 2, q, rng)) == 2
    assert generic.degree == 3 and degenerate.degree == 2


def test_implicitize_needs_enough_samples():
    with pytest.raises(ValueError):
        implicitize(veronese_parametrization(101), 2, 101, np.random.default_rng(0), samples=10)


def test_delpezzo_generator_count_stable():
    counts = {len(delpezzo_projection(101, seed).generators) for seed in range(3)}
    assert counts == {5}
    model = delpezzo_projection(101, 0)
    assert model.meta["ambient_quadrics"] == 5


def test_quintic_scroll_needs_quartics():
    # cubics through a projected quintic scroll also contain its 4-parasitic plane
    model = scroll_projection("S14", 101, 0)
    rng = np.random.default_rng(1)
    cubics = implicitize(model.parametrization, 3, 101, rng)
    plane = random_plane(rng, 4, 101)
    restricted = [restrict_to_plane(f, plane) for f in cubics]
    assert hilbert_function(restricted, 8) == 6
    assert section_degree(model, plane) == 5


def test_scroll_kinds():
    with pytest.raises(ValueError):
        scroll_projection("S05", 101, 0)


def test_quartic_scroll_ruling_lies_on_surface(models):
    model = models["quartic-scroll", 101]
    a, b = ruling_line(model, 3, 5)
    line = ProjLine(ProjPoint(a, 101), ProjPoint(b, 101))
    assert all(not any(restrict_to_line(g, line)) for g in model.generators)


def test_random_bordiga_retries_are_bounded():
    model = random_bordiga(101, 0)
    assert model.provenance == "bordiga" and "matrix" in model.meta


def test_unknown_family():
    with pytest.raises(ValueError):
        build_family("cone", 101, 0)


def test_gcd_of_parasitic_restrictions_is_the_cubic():
    q = 101
    model, plane = bordiga_with_parasitic_plane(q, 0)
    rng = np.random.default_rng(2)
    forms = [restrict_to_plane(g, plane) for g in model.generators]
    for _ in range(5):
        u, v = rng.integers(0, q, size=(2, 3))
        line = ProjLine(ProjPoint(tuple(int(t) for t in u), q), ProjPoint(tuple(int(t) for t in v), q))
        assert binary_gcd_degree([restrict_to_line(f, line) for f in forms], q) == 3

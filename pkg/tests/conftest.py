import random
from fractions import Fraction


from bottchern.bicomplex import ComplexModel, Form, FormBasisElement
from bottchern.exactnum import ZERO, GaussianRational

E = FormBasisElement


def random_gq(rng: random.Random, zero_weight: float = 0.3) -> GaussianRational:
    if rng.random() < zero_weight:
        return ZERO
    re = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    im = Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if rng.random() < 0.6 else Fraction(0)
    return GaussianRational(re, im)


def sigma_model(s12, s11, s12b, s21b, s22b, name="sigma") -> ComplexModel:
    """d phi1 = d phi2 = 0 and d phi3 in the span of phi1, phi2 and their conjugates."""
    d3 = Form(3, {E((1, 2), ()): s12, E((1,), (1,)): s11, E((1,), (2,)): s12b,
                  E((2,), (1,)): s21b, E((2,), (2,)): s22b})
    return ComplexModel.from_differentials(name, 3, [Form(3), Form(3), d3])


def random_sigma_models(count: int, seed: int) -> list:
    rng = random.Random(seed)
    return [sigma_model(*(random_gq(rng) for _ in range(5)), name=f"sigma_{seed}_{i}") for i in range(count)]


def solvable_model(a1, b1, a2, b2, name="solvable") -> ComplexModel:
    """d phi_i = a_i phi_i^phi3 + b_i phi_i^bar3 (i = 1, 2), d phi3 = 0.

    Integrable for all parameters and non-unimodular in general, so it
    separates bicomplex identities from compact-manifold ones."""
    d1 = Form(3, {E((1, 3), ()): a1, E((1,), (3,)): b1})
    d2 = Form(3, {E((2, 3), ()): a2, E((2,), (3,)): b2})
    return ComplexModel.from_differentials(name, 3, [d1, d2, Form(3)])


def exotic_model() -> ComplexModel:
    return ComplexModel.from_differentials("exotic", 3, [Form(3, {E((1,), (1,)): 1}), Form(3), Form(3)])


# -- acceptance summary -----------------------------------------------------------

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            num, title = mark.args
            _CRITERIA.setdefault(num, {"title": title, "ok": True, "ran": False})
            item.user_properties.append(("criterion", num))


def pytest_runtest_logreport(report):
    for key, num in report.user_properties:
        if key != "criterion":
            continue
        entry = _CRITERIA[num]
        if report.when == "call":
            entry["ran"] = True
        if report.failed or (report.when == "call" and report.skipped):
            entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        e = _CRITERIA[num]
        status = "PASS" if e["ok"] and e["ran"] else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {status}  {e['title']}")

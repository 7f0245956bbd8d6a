"""Command-line layer: grammar, descriptors, reports, schemas, exit codes."""

import io
import json
from fractions import Fraction

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwp.cli import (
    RunConfig,
    SpaceDescriptor,
    UsageError,
    parse_config_file,
    parse_rational,
    report_schema,
    run_command,
)
from qwp.grading import ResolutionOfIdentity, verify_resolution
from qwp.parsing import ParseError, parse_expression, parse_scalar
from qwp.scalar import QScalar
from qwp.star_algebra import (
    AlgebraElement,
    AlgebraPresentation,
    InvalidGeneratorError,
    normalize,
    z,
    z_star,
)

q = QScalar.q()
S1 = AlgebraPresentation.sphere(1)
S2 = AlgebraPresentation.sphere(2)
SIG1 = AlgebraPresentation.sigma(1)


def run(argv):
    """Exit code, decoded report (or None) and the raw bytes of stdout."""
    out, err = io.StringIO(), io.StringIO()
    code = run_command(argv, stdout=out, stderr=err)
    text = out.getvalue()
    return code, json.loads(text) if text else None, text


# -- expression grammar --------------------------------------------------------


def test_adjacent_star_is_adjoint():
    x = parse_expression("z0*z0", S1)
    expected = AlgebraElement.one(S1) - normalize((z(1), z_star(1)), S1).scale(q ** -2)
    assert x == expected


def test_spaced_star_multiplies():
    x = parse_expression("q^2 * z1 * z0", S2)
    assert x == normalize([(q, (z(0), z(1)))], S2)


def test_unknown_index_rejected():
    with pytest.raises(InvalidGeneratorError):
        parse_expression("z9", S1)


def test_w_needs_sigma_context():
    with pytest.raises(InvalidGeneratorError):
        parse_expression("w z0", S1)
    assert not parse_expression("w z0", SIG1).is_zero()


def test_syntax_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse_expression("z0 + * z1", S1)
    assert err.value.position == 5
    assert "generator" in err.value.expected


def test_scalar_division_forms():
    assert parse_scalar("(1 - q^2)/(q^2)") == (QScalar.one() - q ** 2) / q ** 2
    assert parse_scalar("3/2") == QScalar(Fraction(3, 2))
    with pytest.raises(ParseError):
        parse_scalar("z0")


def test_parenthesised_sums_scale():
    x = parse_expression("q * (z0 + 2 z1)", S1)
    assert x == normalize([(q, (z(0),)), (2 * q, (z(1),))], S1)


_STEP = st.tuples(st.integers(min_value=0, max_value=2), st.booleans())


@settings(max_examples=40, deadline=None)
@given(st.lists(_STEP, max_size=6), st.integers(min_value=-3, max_value=3))
def test_print_parse_round_trip(steps, power):
    word = tuple(z_star(i) if starred else z(i) for i, starred in steps)
    x = normalize(word, S2).scale(q ** power) - AlgebraElement.one(S2)
    assert parse_expression(str(x), S2) == x


# -- descriptors and configuration ----------------------------------------------


def test_space_descriptor_validation():
    SpaceDescriptor("lens", 1, (1, 1), modulus=2)
    with pytest.raises(UsageError):
        SpaceDescriptor("lens", 1, (1, 1))
    with pytest.raises(UsageError):
        SpaceDescriptor("sphere", 1, (1, 1), modulus=2)
    with pytest.raises(UsageError):
        SpaceDescriptor("sphere", 1, (1,))
    with pytest.raises(UsageError):
        SpaceDescriptor("sphere", 1, (1, 0))
    with pytest.raises(UsageError):
        SpaceDescriptor("orbifold", 1, (1, 1))
    with pytest.raises(UsageError):
        SpaceDescriptor("sphere", 1, (1, 1), q0=Fraction(3, 2))


def test_space_descriptor_gradings():
    cyclic = SpaceDescriptor("lens", 1, (1, 1), modulus=2).grading()
    assert cyclic.modulus == 2 and cyclic.scale == 1
    scaled = SpaceDescriptor("wp", 1, (1, 3)).grading()
    assert scaled.scale == 3 and scaled.modulus == 0
    real = SpaceDescriptor("rp", 1, (1, 2)).grading()
    assert real.pres.kind == "sigma" and real.scale == 2
    plain = SpaceDescriptor("sigma", 2, (1, 1, 2)).grading()
    assert plain.scale == 1 and plain.modulus == 0


def test_rational_flag_parsing():
    assert parse_rational("1/2") == Fraction(1, 2)
    assert parse_rational("3") == Fraction(3)
    for bad in ("0.5", "1e-3", "1/0", "q"):
        with pytest.raises(UsageError):
            parse_rational(bad)


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig(cutoff=0)
    with pytest.raises(UsageError):
        RunConfig(tolerance=0.0)
    with pytest.raises(UsageError):
        RunConfig(degree_cap=0)


def test_config_file_round(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("cutoff = 4  # small space\n\ntolerance = 1e-10\nq0 = 1/3\n")
    assert parse_config_file(cfg) == {"cutoff": "4", "tolerance": "1e-10", "q0": "1/3"}
    code, report, _ = run(
        ["rep", "verify", "--family", "sphere", "--n", "1", "--config", str(cfg)]
    )
    assert code == 0
    assert report["cutoff"] == 4 and report["q0"] == "1/3" and report["tolerance"] == 1e-10


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("cutoff = 4\nq0 = 1/3\n")
    code, report, _ = run(
        ["rep", "verify", "--family", "sphere", "--n", "1", "--cutoff", "6", "--config", str(cfg)]
    )
    assert code == 0 and report["cutoff"] == 6 and report["q0"] == "1/3"


def test_config_refuses_float_q0(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("q0 = 0.5\n")
    code, _, text = run(["rep", "verify", "--family", "sphere", "--n", "1", "--config", str(cfg)])
    assert code == 2 and text == ""


def test_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run(["suite", "--select", "power-products", "--config", str(cfg)])[0] == 2


# -- worked command examples -----------------------------------------------------


def test_teardrop_command():
    code, report, _ = run(["ktheory", "teardrop", "2", "3"])
    assert code == 0
    assert report["K0"] == {"rank": 5, "torsion": []}
    assert report["K1"] == {"rank": 0, "torsion": []}


def test_real_teardrop_command():
    code, report, _ = run(["ktheory", "real-teardrop", "2", "1"])
    assert code == 0
    assert report["K0_candidates"] == [
        {"rank": 1, "torsion": [2, 2]},
        {"rank": 1, "torsion": [4]},
    ]


def test_lens_command():
    code, report, _ = run(["ktheory", "lens", "--N", "3", "--weights", "1,1,2"])
    assert code == 0
    assert report["K1"] == {"rank": 1, "torsion": []}
    assert report["K0"] == {"rank": 1, "torsion": [3, 3]}
    assert report["formula_check"]["matches"] is True


def test_certify_lens_pairs_reverify():
    code, report, _ = run(["grading", "certify", "--space", "lens", "--N", "2", "--weights", "1,1"])
    assert code == 0 and report["verified"] is True
    g = SpaceDescriptor("lens", 1, (1, 1), modulus=2).grading()
    for entry in report["degrees"]:
        assert entry["certified"]
        pairs = tuple(
            (parse_expression(a, S1), parse_expression(b, S1)) for a, b in entry["pairs"]
        )
        res = ResolutionOfIdentity(entry["degree"], pairs)
        assert verify_resolution(res, g)["valid"]


def test_certify_reports_failure_without_raising():
    # weights with no unit first entry leave the Z-grading route unconstructed
    code, report, _ = run(["grading", "certify", "--space", "sphere", "--weights", "2,3"])
    assert code == 1
    assert report["status"] == "fail" and report["verified"] is False
    assert all(not entry["certified"] for entry in report["degrees"])
    jsonschema.validate(report, report_schema("grading certify"))


def test_normalize_command_round_trips():
    code, first, _ = run(["normalize", "z0*z0", "--n", "1"])
    assert code == 0 and first["term_count"] == 2
    code, second, _ = run(["normalize", first["printed"], "--n", "1"])
    assert code == 0 and second["printed"] == first["printed"]
    assert second["element"] == first["element"]


def test_degree_command_inhomogeneous():
    code, report, _ = run(["grading", "degree", "z0 + z0 z1*", "--n", "1", "--weights", "1,2"])
    assert code == 0
    assert report["homogeneous"] is False and report["degree"] is None
    assert set(report["components"]) == {"1", "-1"}


def test_assemble_command_entries():
    code, report, _ = run(
        ["rep", "assemble", "z1", "--family", "sphere", "--n", "1", "--q0", "1/2", "--cutoff", "2"]
    )
    assert code == 0 and report["dim"] == 3 and report["shift"] == 0
    assert report["entries"] == [[0, 0, 0.5, 0.0], [1, 1, 0.25, 0.0], [2, 2, 0.125, 0.0]]


def test_fredholm_command_values():
    code, report, _ = run(
        ["rep", "fredholm", "z0 z0*", "--n", "2", "--m", "1", "--q0", "1/2", "--cutoff", "8"]
    )
    assert code == 0
    assert report["series_closed_form"] == 4.0
    assert 0 <= report["series_gap"] <= report["tail_bound"]


# -- exit codes -------------------------------------------------------------------


def test_usage_errors_exit_two():
    assert run(["nonsense"])[0] == 2
    assert run(["rep", "verify", "--family", "sphere", "--n", "1"])[0] == 2
    assert run(["rep", "verify", "--family", "bar", "--n", "1", "--q0", "1/2"])[0] == 2
    assert run(["rep", "verify", "--family", "sphere", "--n", "1", "--q0", "0.5"])[0] == 2
    assert run(["normalize", "z0", "--n", "1", "--q0", "3/2"])[0] == 2
    assert run(["suite", "--select", "bogus"])[0] == 2
    assert run(["grading", "certify", "--weights", "1,2", "--method", "ansatz"])[0] == 2


def test_computation_errors_exit_one():
    code, report, _ = run(["normalize", "z9", "--n", "1"])
    assert code == 1 and report["status"] == "error"
    assert report["error"]["type"] == "InvalidGeneratorError"
    jsonschema.validate(report, report_schema("error"))
    code, report, _ = run(["normalize", "z0 +", "--n", "1"])
    assert code == 1 and report["error"]["type"] == "ParseError"


def test_failed_checks_exit_one():
    code, report, _ = run(
        [
            "rep", "verify", "--family", "sphere", "--n", "1",
            "--q0", "1/2", "--cutoff", "4", "--tolerance", "1e-30",
        ]
    )
    assert code == 1 and report["status"] == "fail"
    assert any(c["status"] == "fail" for c in report["checks"])


# -- report stability -------------------------------------------------------------


def test_reports_are_byte_identical():
    for argv in (
        ["ktheory", "teardrop", "3", "2"],
        ["rep", "verify", "--family", "sigma", "--n", "1", "--q0", "1/3",
         "--cutoff", "4", "--lam", "1/4", "--sign", "-1"],
        ["suite", "--select", "power-products", "--seed", "7"],
    ):
        assert run(argv)[2] == run(argv)[2]


def test_output_file_matches_stdout(tmp_path):
    target = tmp_path / "report.json"
    _, _, text = run(["ktheory", "teardrop", "1", "1", "--output", str(target)])
    assert target.read_text() == text


@pytest.mark.parametrize(
    "argv,command",
    [
        (["normalize", "z0 z1*", "--n", "1"], "normalize"),
        (["grading", "degree", "z0", "--n", "1", "--weights", "1,2"], "grading degree"),
        (["grading", "certify", "--space", "lens", "--N", "2", "--weights", "1,1"],
         "grading certify"),
        (["grading", "certify", "--space", "wp", "--weights", "1,2", "--method", "ansatz"],
         "grading certify"),
        (["ktheory", "lens", "--N", "2", "--weights", "1,1"], "ktheory lens"),
        (["ktheory", "teardrop", "1", "2"], "ktheory teardrop"),
        (["ktheory", "real-teardrop", "2", "2"], "ktheory real-teardrop"),
        (["rep", "assemble", "z0 z0*", "--family", "sphere", "--n", "1",
          "--q0", "1/2", "--cutoff", "3"], "rep assemble"),
        (["rep", "verify", "--family", "bar", "--n", "1", "--k", "1",
          "--q0", "1/2", "--cutoff", "4"], "rep verify"),
        (["rep", "sectors", "--family", "sphere", "--n", "1", "--m", "2",
          "--q0", "1/2", "--cutoff", "4"], "rep sectors"),
        (["rep", "fredholm", "z0 z0*", "--n", "1", "--m", "1",
          "--q0", "1/2", "--cutoff", "4"], "rep fredholm"),
        (["suite", "--select", "teardrop-k-groups,k0-alternatives"], "suite"),
    ],
)
def test_reports_validate_against_schemas(argv, command):
    code, report, _ = run(argv)
    assert code == 0, report
    jsonschema.validate(report, report_schema(command))


def test_sectors_command_control():
    code, report, _ = run(
        ["rep", "sectors", "--family", "sigma", "--n", "1", "--m", "2",
         "--q0", "1/2", "--cutoff", "5", "--lam", "1/4", "--sign", "-1"]
    )
    assert code == 0 and report["all_invariant"] is True
    assert report["control_z0"]["invariant"] is False
    assert all(c["max_residual"] == 0.0 for c in report["checks"])

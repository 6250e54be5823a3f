import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from certificates import (
    REPORT_MODELS,
    CertificateModel,
    JHReportModel,
    NonextendabilityReport,
    Provenance,
    certificate_to_model,
    check_certificate,
    jh_report_to_model,
    report_schema,
    verdict_to_model,
)
from ktheory import GramForm
from search import certify_jh_violation, certify_nonextendable, certify_sequence_nonextendable

PROVENANCE = Provenance(
    box_bound="100",
    modulus_cap="16",
    seed="0",
    resolution_bound="16",
    candidate_bound="10",
    residue_limit="200000",
)


@pytest.fixture(scope="module")
def zero_form_model(bondal_form):
    verdict = certify_nonextendable((1, 1, 1), bondal_form)
    return certificate_to_model(verdict.certificates[0])


def a2_model(kind, **extra):
    fields = dict(
        kind=kind,
        strength="proof",
        side="bi",
        before=[],
        after=[],
        gram=[["1", "-1"], ["0", "1"]],
        basis=[["1", "0"], ["0", "1"]],
        restricted_gram=[["1", "-1"], ["0", "1"]],
    )
    fields.update(extra)
    return CertificateModel(**fields)


def test_emitted_certificates_replay(bondal_form):
    verdicts = [
        certify_nonextendable((1, 1, 1), bondal_form),
        certify_nonextendable((0, 0, 1), bondal_form, box_bound=5),
        certify_nonextendable((1, 0), GramForm.from_rows([[1, 0], [0, 3]]), box_bound=5),
        certify_nonextendable((1, 0), GramForm.from_rows([[1, 0], [0, 3]]), box_bound=5, modulus_cap=2),
        certify_sequence_nonextendable([(0, 0, 1), (0, 1, 2), (1, 2, 2)], bondal_form),
    ]
    for verdict in verdicts:
        for certificate in verdict.certificates:
            check = check_certificate(certificate_to_model(certificate))
            assert check.accepted, check.reasons


def test_zero_form_model_contents(zero_form_model):
    assert zero_form_model.kind == "zero-form"
    assert zero_form_model.strength == "proof"
    assert zero_form_model.basis == [["1", "0", "-1"], ["0", "1", "1"]]
    assert zero_form_model.restricted_gram == [["0", "-1"], ["1", "0"]]


@pytest.mark.parametrize(
    "update",
    [
        {"basis": [["1", "0", "0"], ["0", "1", "1"]]},
        {"basis": [["1", "0", "-1"], ["2", "0", "-2"]], "restricted_gram": [["0", "0"], ["0", "0"]]},
        {"basis": [["2", "0", "-2"], ["0", "1", "1"]], "restricted_gram": [["0", "-2"], ["2", "0"]]},
        {"basis": [["1", "0", "-1"]], "restricted_gram": [["0"]]},
        {"restricted_gram": [["0", "-1"], ["1", "1"]]},
        {"gram": [["1", "-2", "2"], ["0", "1", "-2"], ["0", "0", "2"]]},
        {"gram": [["1", "-2", "2"], ["0", "1", "-2"]]},
        {"gram": [["1", "-2", "x"], ["0", "1", "-2"], ["0", "0", "1"]]},
        {"before": [["1", "1"]]},
        {"before": [["0", "0", "1"]]},
        {"after": [["1", "0", "0"]]},
        {"kind": "modular"},
        {"kind": "modular", "modulus": "1"},
        {"kind": "modular", "modulus": "2", "residues": ["1"]},
        {"kind": "modular", "modulus": "3", "residues": ["0", "2"]},
        {"kind": "box", "box_bound": "0"},
        {"kind": "box", "box_bound": "1000"},
        {"kind": "extension"},
        {"kind": "extension", "witness": ["1", "0", "-1"]},
        {"kind": "extension", "witness": ["1", "0", "0"]},
        {"kind": "magic"},
    ],
)
def test_corrupted_certificates_are_rejected(zero_form_model, update):
    corrupted = zero_form_model.model_copy(update=update)
    check = check_certificate(corrupted)
    assert not check.accepted
    assert check.reasons


def test_wrong_strength_claims_are_rejected():
    assert not check_certificate(a2_model("zero-form")).accepted
    assert not check_certificate(a2_model("box", box_bound="1")).accepted
    assert not check_certificate(a2_model("modular", modulus="2", residues=["0", "1"])).accepted


def test_sound_modular_certificate_is_accepted():
    model = CertificateModel(
        kind="modular",
        strength="proof",
        side="bi",
        before=[],
        after=[],
        gram=[["0", "2"], ["0", "0"]],
        basis=[["1", "0"], ["0", "1"]],
        restricted_gram=[["0", "2"], ["0", "0"]],
        modulus="2",
        residues=["0"],
    )
    assert check_certificate(model).accepted


def test_models_forbid_unknown_fields(zero_form_model):
    data = json.loads(zero_form_model.model_dump_json())
    data["surprise"] = "1"
    with pytest.raises(ValidationError):
        CertificateModel.model_validate(data)


def test_nonextendability_report_round_trip(bondal_form):
    report = verdict_to_model(certify_nonextendable((1, 1, 1), bondal_form), PROVENANCE)
    assert report.verdict == "numerically nonextendable"
    assert report.replayed == [True, True]
    text = report.model_dump_json(indent=2)
    assert NonextendabilityReport.model_validate_json(text) == report
    assert report.model_dump_json(indent=2) == text


def test_jh_report_model(bondal):
    model = jh_report_to_model(certify_jh_violation(bondal), PROVENANCE)
    assert model.verified
    assert (model.long_length, model.short_length, model.remainder_rank) == ("3", "1", "2")
    assert model.full_sequence == [["0", "0", "1"], ["0", "1", "2"], ["1", "2", "2"]]
    assert model.candidates[0].accounting_determinant in ("1", "-1")
    assert JHReportModel.model_validate_json(model.model_dump_json()) == model


def test_schema_covers_every_report():
    schema = report_schema()
    assert set(schema) == set(REPORT_MODELS)
    assert "restricted_gram" in json.dumps(schema["certify-nonext"])


def _without_annotations(node):
    # titles and factory defaults vary between pydantic releases
    if isinstance(node, dict):
        return {k: _without_annotations(v) for k, v in node.items() if k not in ("title", "default")}
    if isinstance(node, list):
        return [_without_annotations(v) for v in node]
    return node


def test_shipped_schema_matches_models():
    shipped = json.loads((Path(__file__).parent.parent / "schema" / "reports.json").read_text(encoding="utf-8"))
    generated = report_schema()
    assert set(shipped) == set(generated) == set(REPORT_MODELS)
    for name in generated:
        assert _without_annotations(shipped[name]) == _without_annotations(generated[name]), name

import io
import json
import math

import numpy as np
import pytest

from yamabe import families, specio
from yamabe.catalog import build_example
from yamabe.errors import SpecValidationError
from yamabe.geodesics import integrate_geodesic
from yamabe.geometry import SignatureSpec
from yamabe.soliton import certify
from yamabe.profiles import Interval

BASE_DOC = {
    "n": 5, "d": 1,
    "alpha": [1.0, 0.0, 0.0, 0.0, 0.0],
    "domain": [0.0, 40.0],
    "profiles": {"phi": "sqrt(xi/20)", "f": "sqrt(20/xi)", "h": "20*ln(xi)"},
}


def doc_with(**overrides):
    doc = json.loads(json.dumps(BASE_DOC))
    doc.update(overrides)
    return doc


class TestLoadDocument:
    def test_minimal_document(self):
        spec, meta = specio.load_document(doc_with())
        assert spec.n == 5 and spec.d == 1
        assert spec.sig.epsilon == (1,) * 5      # default all +1
        assert spec.rho == 0.0 and spec.lambda_f == 0.0
        assert meta == {}
        assert spec.phi.value(20.0) == pytest.approx(1.0)

    def test_loads_from_text_path_and_file(self, tmp_path):
        text = json.dumps(doc_with(label="roundtrip"))
        by_text, _ = specio.loads_document(text)
        path = tmp_path / "doc.json"
        path.write_text(text, encoding="utf-8")
        by_path, _ = specio.load_document(str(path))
        with open(path, "r", encoding="utf-8") as fh:
            by_file, _ = specio.load_document(fh)
        for spec in (by_text, by_path, by_file):
            assert spec.label == "roundtrip"
            assert spec.h.value(2.0) == by_text.h.value(2.0)

    def test_meta_settings(self):
        _, meta = specio.load_document(doc_with(tolerance=1e-6, grid=50))
        assert meta == {"tolerance": 1e-6, "grid": 50}

    def test_null_domain_endpoints(self):
        doc = doc_with(domain=[None, None],
                       profiles={"phi": "exp(xi)", "f": "1", "h": "xi"})
        spec, _ = specio.load_document(doc)
        assert spec.domain.lo == -math.inf and spec.domain.hi == math.inf
        doc = doc_with(domain=[0.0, None],
                       profiles={"phi": "sqrt(xi)", "f": "1", "h": "xi"})
        spec, _ = specio.load_document(doc)
        assert spec.domain.lo == 0.0 and spec.domain.hi == math.inf

    @pytest.mark.parametrize("mutate, key", [
        (dict(n=2), "n"),
        (dict(d=0), "d"),
        (dict(signature=[1, 1, 1]), "signature"),
        (dict(signature=[1, 1, 1, 1, 2]), "signature"),
        (dict(alpha=[1.0, 0.0]), "alpha"),
        (dict(alpha=[0.0, 0.0, 0.0, 0.0, 0.0]), "alpha"),
        (dict(domain=[3.0]), "domain"),
        (dict(domain=[4.0, 1.0]), "domain"),
        (dict(tolerance=0.0), "tolerance"),
        (dict(tolerance="tight"), "tolerance"),
        (dict(grid=1), "grid"),
        (dict(rho="flat"), "rho"),
        (dict(label=7), "label"),
    ])
    def test_validation_names_the_field(self, mutate, key):
        with pytest.raises(SpecValidationError) as err:
            specio.load_document(doc_with(**mutate))
        assert err.value.key == key

    def test_missing_required_fields(self):
        doc = doc_with()
        del doc["n"]
        with pytest.raises(SpecValidationError, match="missing"):
            specio.load_document(doc)
        doc = doc_with()
        del doc["profiles"]
        with pytest.raises(SpecValidationError,
                           match="exactly one of 'profiles' and 'family'"):
            specio.load_document(doc)

    def test_profiles_and_family_are_exclusive(self):
        doc = doc_with(family={"id": "thm16", "k1": 1.0, "k2": 1.0})
        with pytest.raises(SpecValidationError,
                           match="exactly one of 'profiles' and 'family'"):
            specio.load_document(doc)

    def test_bad_expression_names_the_profile(self):
        doc = doc_with(profiles={"phi": "sqrt(xi", "f": "1", "h": "xi"})
        with pytest.raises(SpecValidationError) as err:
            specio.load_document(doc)
        assert err.value.key == "profiles.phi"

    def test_bool_is_not_an_int(self):
        with pytest.raises(SpecValidationError) as err:
            specio.load_document(doc_with(n=True))
        assert err.value.key == "n"


class TestFamilyDocuments:
    def test_family_needs_finite_domain(self):
        doc = doc_with(domain=[0.0, None])
        del doc["profiles"]
        doc["family"] = {"id": "thm16", "k1": 1.0, "k2": 1.0}
        with pytest.raises(SpecValidationError, match="finite domain"):
            specio.load_document(doc)

    def test_family_rejects_nonzero_rho(self):
        doc = doc_with(domain=[1.0, 40.0], rho=1.0)
        del doc["profiles"]
        doc["family"] = {"id": "thm16", "k1": 1.0, "k2": 1.0}
        with pytest.raises(SpecValidationError) as err:
            specio.load_document(doc)
        assert err.value.key == "rho"

    def test_unknown_family_id(self):
        doc = doc_with(domain=[1.0, 40.0])
        del doc["profiles"]
        doc["family"] = {"id": "thm99"}
        with pytest.raises(SpecValidationError) as err:
            specio.load_document(doc)
        assert err.value.key == "family.id"

    def test_thm16_roundtrip(self):
        built = families.family_thm16(1.0, 1.0, k3=0.0, k4=0.0,
                                      xi_range=(1.0, 40.0), n=5, d=1,
                                      run_certify=False)
        doc = specio.family_document(
            "thm16", {"k1": 1.0, "k2": 1.0, "k3": 0.0, "k4": 0.0},
            n=5, d=1, sig=built.sig, alpha=built.direction.alpha,
            lambda_f=built.lambda_f, domain=(1.0, 40.0), label=built.label)
        reloaded, _ = specio.load_document(json.loads(json.dumps(doc)))
        assert reloaded.label == built.label
        assert reloaded.lambda_f == built.lambda_f
        for xi in np.linspace(1.5, 39.0, 9):
            assert reloaded.phi.value(xi) == pytest.approx(
                built.phi.value(xi), rel=1e-12)
            assert reloaded.f.value(xi) == pytest.approx(
                built.f.value(xi), rel=1e-12)
            assert reloaded.h.value(xi) == pytest.approx(
                built.h.value(xi), rel=1e-12)

    def test_thm15_roundtrip_carries_variant(self):
        built = families.family_thm15(1.0, 1.0, -0.2, 0.0, lambda_f=-0.5,
                                      xi_range=(-0.4, 0.6), n=5, d=1,
                                      run_certify=False)
        doc = specio.family_document(
            "thm15",
            {"k1": 1.0, "k2": 1.0, "k3": -0.2, "k4": 0.0,
             "q_variant": "statement", "w_branch": "principal"},
            n=5, d=1, sig=built.sig, alpha=built.direction.alpha,
            lambda_f=-0.5, domain=(-0.4, 0.6))
        reloaded, _ = specio.load_document(doc)
        for xi in np.linspace(-0.3, 0.5, 7):
            assert reloaded.phi.value(xi) == pytest.approx(
                built.phi.value(xi), rel=1e-10)

    def test_expression_document_roundtrip(self):
        spec, _ = specio.load_document(doc_with(label="example-2"))
        doc = specio.document_from_spec(spec, dict(BASE_DOC["profiles"]))
        again, _ = specio.load_document(doc)
        assert again.label == "example-2"
        assert again.h.value(3.0) == spec.h.value(3.0)

    def test_floats_survive_json_roundtrip(self):
        values = [0.1, 1e-8, math.pi, 2.0 / 3.0, 1e300]
        for x in values:
            doc = specio.family_document(
                "thm18", {"k1": x, "phi": "1", "f": "2"},
                n=4, d=2, sig=SignatureSpec((-1, 1, 1, 1)),
                alpha=(1.0, 1.0, 0.0, 0.0), lambda_f=0.0, domain=(0.0, 1.0))
            back = json.loads(json.dumps(doc))
            assert back["family"]["k1"] == x          # repr round trip


class TestCsvWriters:
    def test_profile_csv(self):
        spec, _ = specio.load_document(doc_with())
        buf = io.StringIO()
        specio.write_profile_csv(spec, buf, grid=10)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "xi,phi,f,h"
        assert len(lines) == 11
        first = lines[1].split(",")
        assert len(first) == 4
        xi = float(first[0])
        assert first[1] == repr(math.sqrt(xi / 20.0))

    def test_profile_csv_custom_interval_is_clipped(self):
        spec, _ = specio.load_document(doc_with())
        buf = io.StringIO()
        specio.write_profile_csv(spec, buf, grid=5,
                                 interval=Interval(-5.0, 10.0))
        xis = [float(line.split(",")[0])
               for line in buf.getvalue().splitlines()[1:]]
        assert all(0.0 < xi <= 10.0 for xi in xis)

    def test_portrait_csv_blocks(self):
        trajectories = families.phase_portrait(
            [(1.0, 0.5), (1.5, 0.0)], (-0.3, 0.3), lambda_f=0.0,
            points_per_side=4)
        buf = io.StringIO()
        specio.write_portrait_csv(trajectories, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "xi,phi,dphi,status"
        assert "" in lines[1:]                      # blank separator line
        data = [ln for ln in lines[1:] if ln]
        statuses = {ln.split(",")[3] for ln in data}
        assert statuses <= {"ok", "stationary", "blowup", "positivity-loss"}

    def test_geodesic_csv_header(self):
        spec = build_example("example-5")
        res = integrate_geodesic(spec, np.zeros(4),
                                 [0.1, -0.1, 0.0, 0.0], [0.0, 0.0],
                                 [0.1, 0.0], s_span=(0.0, 1.0), samples=5)
        buf = io.StringIO()
        specio.write_geodesic_csv(res, 4, 2, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == ("s,y_1,y_2,y_3,y_4,v_1,v_2,v_3,v_4,"
                            "yf_1,yf_2,vf_1,vf_2,status")
        assert len(lines) == 6
        assert lines[1].endswith(",completed")
        assert float(lines[1].split(",")[0]) == 0.0

    def test_report_json_merges_extra(self):
        spec = build_example("example-2")
        report = certify(spec, interval=Interval(1.0, 40.0))
        text = specio.report_json(report, extra={"source": "catalog"})
        payload = json.loads(text)
        assert payload["verdict"] == "certified"
        assert payload["source"] == "catalog"

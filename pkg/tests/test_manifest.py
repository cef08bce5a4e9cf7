import pytest
import yaml

from paralab.classify import classify_chart
from paralab.errors import ManifestError
from paralab.gallery import get_chart, list_charts
from paralab.manifest import dump_manifest, dumps_manifest, load_expected, load_manifest, read_manifest_file


def _doc(**kw):
    doc = yaml.safe_load(dumps_manifest(get_chart("ex5_1_spacelike").chart))
    doc.update(kw)
    return doc


@pytest.mark.parametrize("name", list_charts())
def test_round_trip_preserves_trees(name):
    chart = get_chart(name).chart
    again = load_manifest(yaml.safe_load(dumps_manifest(chart)))
    assert again._fields == chart._fields
    assert again.domain == chart.domain and again.epsilon == chart.epsilon


def test_round_trip_classification_identical():
    chart = get_chart("ex2_3_g2").chart
    again = load_manifest(dump_manifest(chart))
    a, b = classify_chart(chart, count=6), classify_chart(again, count=6)
    assert a.properties == b.properties and a.identities == b.identities


def test_example_5_1_manifest_file(tmp_path):
    path = tmp_path / "ex.yaml"
    entry = get_chart("ex5_1_spacelike")
    path.write_text(dumps_manifest(entry.chart, entry.expected))
    chart, expected = read_manifest_file(path)
    assert expected == entry.expected
    assert classify_chart(chart).properties == classify_chart(entry.chart).properties


def test_full_matrix_and_numbers_accepted():
    chart = load_manifest(_doc(metric=[["exp(2*z)", 0, 0], [0, "exp(-2*z)", 0], [0, 0, 1]]))
    assert chart.g[0, 1].value([0, 0, 0]) == 0.0


@pytest.mark.parametrize(
    "patch,path",
    [
        ({"metric": [["exp(2*z)", "1", "0"], ["2", "exp(-2*z)", "0"], ["0", "0", "1"]]}, "metric[0][1]"),
        ({"metric": [["1"], ["0", "1"]]}, "metric"),
        ({"metric": [["1"], ["0"], ["0", "0", "1"]]}, "metric[1]"),
        ({"eta": ["dz - y*dx", "0", "1"]}, "eta[0]"),
        ({"phi": [["1", "0", "0"], ["0", "foo(x)", "0"], ["0", "0", "0"]]}, "phi[1][1]"),
        ({"xi": ["0", True, "1"]}, "xi[1]"),
        ({"epsilon": 2}, "epsilon"),
        ({"version": 2}, "version"),
        ({"coordinates": ["x", "x", "z"]}, "coordinates"),
        ({"coordinates": ["x", "1y", "z"]}, "coordinates[1]"),
        ({"domain": {"x": [1, -1]}}, "domain.x"),
        ({"domain": {"w": [0, 1]}}, "domain"),
        ({"expected": {"para_sasakian": "maybe"}}, "expected.para_sasakian"),
    ],
)
def test_errors_carry_field_paths(patch, path):
    doc = _doc(**patch)
    with pytest.raises(ManifestError) as exc:
        load_manifest(doc)
        load_expected(doc)
    assert str(exc.value).startswith(path)


def test_unknown_keys_and_non_mapping():
    with pytest.raises(ManifestError):
        load_manifest(_doc(colour="blue"))
    with pytest.raises(ManifestError):
        load_manifest(["not", "a", "mapping"])


def test_file_errors(tmp_path):
    with pytest.raises(ManifestError):
        read_manifest_file(tmp_path / "missing.yaml")
    bad = tmp_path / "bad.yaml"
    bad.write_text("version: [1,\n")
    with pytest.raises(ManifestError) as exc:
        read_manifest_file(bad)
    assert str(bad) in str(exc.value)

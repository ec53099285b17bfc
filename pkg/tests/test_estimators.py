import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from enginearch import (
    CouplingAnalyzer,
    EngineModel,
    IncludeGraphExtractor,
    SubsystemTagger,
)
from enginearch.metrics import SubsystemGraph
from enginearch.resolver import IncludeEdge, UnresolvedInclude
from enginearch.scanner import extract_file
from enginearch.subsystems import UNASSIGNED, SubsystemMapping

from conftest import lift_engine


def test_params_and_clone():
    est = CouplingAnalyzer(pair_threshold=3, averaging="zero_fill")
    assert est.get_params() == {"pair_threshold": 3, "inner_core_size": 4,
                                "averaging": "zero_fill", "normalize": False}
    copy = clone(est).set_params(inner_core_size=2)
    assert copy.inner_core_size == 2 and est.inner_core_size == 4
    assert clone(IncludeGraphExtractor(exclude_dirs=("x",))).exclude_dirs == ("x",)


@pytest.mark.parametrize("est, call", [
    (IncludeGraphExtractor(), lambda e: e.transform([])),
    (SubsystemTagger(), lambda e: e.transform(["/a"])),
    (CouplingAnalyzer(), lambda e: e.predict(["COR"])),
])
def test_not_fitted(est, call):
    with pytest.raises(NotFittedError):
        call(est)


def test_extractor_matches_pipeline(corpus_config):
    spec = corpus_config.repo("alpha")
    ext = IncludeGraphExtractor(exclude_dirs=("generated",)).fit(spec.root)
    assert len(ext.files_) == 34
    assert len(ext.graph_.edges) == 51
    assert ext.fit(spec) is ext and len(ext.edges_) == 52


def test_extractor_transform_resolves_raw(corpus_config):
    spec = corpus_config.repo("alpha")
    ext = IncludeGraphExtractor().fit(spec)
    raws = [r for f in ext.files_[:5] for r in extract_file(f)]
    out = ext.transform(raws)
    assert len(out) == len(raws)
    assert all(isinstance(r, (IncludeEdge, UnresolvedInclude)) for r in out)


def test_extractor_validation(tmp_path):
    with pytest.raises(ValueError, match="n_jobs"):
        IncludeGraphExtractor(n_jobs=0).fit(tmp_path)
    with pytest.raises(TypeError):
        IncludeGraphExtractor().fit(42)


def test_tagger(tmp_path):
    tagger = SubsystemTagger(SubsystemMapping((("src/audio", "AUD"),)), repo_root=tmp_path).fit()
    assert tagger.transform([str(tmp_path / "src/audio/a.h"), str(tmp_path / "b.h")]) == ["AUD", UNASSIGNED]
    assert tagger.fit_transform([str(tmp_path / "src/audio/x.cpp")]) == ["AUD"]
    with pytest.raises(ValueError, match="repo_root"):
        SubsystemTagger().fit()


def test_engine_model_equals_direct_lift(corpus_config):
    spec = corpus_config.repo("alpha")
    ext = IncludeGraphExtractor(exclude_dirs=("generated",)).fit(spec.root)
    tags = SubsystemTagger(spec.mapping_file, repo_root=spec.root).fit().transform(ext.graph_.nodes)
    model = EngineModel(engine="alpha").fit(ext.graph_, tags)
    assert model.graph_.edges == lift_engine(spec).edges
    assert model.report_.betweenness["LLR"] == pytest.approx(4.5)
    with pytest.raises(ValueError, match="tags"):
        EngineModel().fit(ext.graph_, tags[:-1])


def test_analyzer_predict(corpus_subsystem_graphs):
    an = CouplingAnalyzer(pair_threshold=2).fit(corpus_subsystem_graphs)
    assert an.predict(list(an.architecture_.inner_core)) == ["inner_core"] * 4
    assert set(an.predict(["HID", "VFX"])) == {"periphery"}
    assert an.matrix_.n_engines == 3


def test_analyzer_rejects_bad_input():
    with pytest.raises(ValueError):
        CouplingAnalyzer().fit([])
    with pytest.raises(TypeError):
        CouplingAnalyzer().fit(["not a graph"])
    g = SubsystemGraph("e", ["COR"], {})
    with pytest.raises(ValueError, match="duplicate"):
        CouplingAnalyzer().fit([g, g])
    with pytest.raises(ValueError, match="pair_threshold"):
        CouplingAnalyzer(pair_threshold=0).fit([g])
    with pytest.raises(ValueError):
        CouplingAnalyzer(averaging="median").fit([g])

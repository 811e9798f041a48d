import json
import logging
import shutil

import pandas as pd
import pytest

from research_recommender.components.classifiers.crud import TrainedModelCRUD
from research_recommender.components.classifiers.schemas import GBTHyper, Hyperparams
from research_recommender.core.enums import FeatureLevel, Method, Phase, Task
from research_recommender.core.exceptions import ConfigException, FeatureMismatchException
from research_recommender.flows.run_experiment_flow import (
    TASK1_COLUMNS,
    TASK2_COLUMNS,
    RunExperimentFlow,
    run_experiment,
)
from research_recommender.flows.schemas import RunConfig, model_file_name
from research_recommender.flows.train_models_flow import TrainModelsFlow


FAST_HYPER = Hyperparams(gbt=GBTHyper(n_trees=10))


def test_run_config_defaults_and_normalization():
    config = RunConfig(cutoff=" 2014.1", k_grid=[20, 5, 20], seeds=[3, 3, 1])
    assert config.cutoff == "2014.1"
    assert config.k_grid == [5, 20]
    assert config.seeds == [3, 1]
    assert config.tasks == [Task.APPLICANT, Task.OPPORTUNITY]
    assert config.methods == Method.all_methods()
    assert str(config.models_path) == "runs/latest/models"


def test_run_config_rejects_bad_values():
    for bad in ({"methods": []}, {"cutoff": "2014"}, {"neg_ratio": 0}, {"methods": ["forest"]}, {"colour": 1}):
        with pytest.raises(ValueError):
            RunConfig(**bad)


def test_run_config_file_then_overrides(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(
        'dataset = "data"\ncutoff = "2013.2"\nmethods = ["logreg"]\nk_grid = [5]\n\n[hyper.gbt]\nn_trees = 7\n',
        encoding="utf-8",
    )
    config = RunConfig.from_file(path, cutoff="2014.1", methods=None)
    assert config.dataset == "data"
    assert config.cutoff == "2014.1"
    assert config.methods == [Method.LOGREG]
    assert config.hyper.gbt.n_trees == 7

    with pytest.raises(ConfigException):
        RunConfig.from_file(path, k_grid=[0])
    with pytest.raises(ConfigException):
        RunConfig.from_file(tmp_path / "missing.toml")


def test_run_config_from_manifest(tmp_path):
    config = RunConfig(dataset="d", methods=[Method.SVM], seeds=[4])
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"command": "eval", "config": config.model_dump(mode="json")}), encoding="utf-8")
    assert RunConfig.from_file(path) == config


def test_model_file_name():
    assert model_file_name(Task.OPPORTUNITY, Method.GBT, FeatureLevel.BASE_PLUS) == "task2_gbt_base_plus.model"


def test_train_all_writes_one_model_per_combination(small_generated, tmp_path):
    config = RunConfig(
        methods=[Method.BASELINE, Method.LOGREG],
        feature_sets=[FeatureLevel.BASE, FeatureLevel.BASE_PLUS_PLUS],
        seeds=[5, 6],
        out=str(tmp_path),
    )
    written = TrainModelsFlow(config, small_generated, "abc").train_all()

    assert len(written) == 2 * 2 * 2
    model = TrainedModelCRUD(tmp_path / "models" / "task2_logreg_base_plus_plus.model").load()
    assert model.feature_names == ("content_sim", "had_teacher", "dept_frac")
    assert model.metadata["seed"] == "5"
    assert model.metadata["dataset_digest"] == "abc"
    assert model.metadata["cutoff"] == "2014.1"
    assert model.metadata["feature_set"] == "base+ht+dept"


def test_flow_caches_examples_and_dumps_them(tiny_dataset, tmp_path):
    config = RunConfig(feature_sets=[FeatureLevel.BASE], seeds=[0])
    flow = TrainModelsFlow(config, tiny_dataset)
    assert flow.examples(Task.APPLICANT, Phase.TRAIN, FeatureLevel.BASE, 0) is flow.examples(
        Task.APPLICANT, Phase.TRAIN, FeatureLevel.BASE, 9
    )

    written = flow.dump_examples(tmp_path)
    assert sorted(path.name for path in written) == [
        "task1_test_base.csv",
        "task1_train_base.csv",
        "task2_test_base.csv",
        "task2_train_base.csv",
    ]
    frame = pd.read_csv(tmp_path / "task1_test_base.csv")
    assert list(frame.columns) == ["student_id", "semesters_enrolled", "credits_approved", "label"]
    assert frame["label"].tolist() == [1, 0, 1]


def test_task2_relevance_and_candidates_on_tiny_data(tiny_dataset):
    flow = RunExperimentFlow(RunConfig(seeds=[0]), tiny_dataset)
    assert flow.candidates() == ["O3", "O4"]
    assert flow.relevant() == {"S1": {"O3"}, "S3": {"O4"}}


def test_experiment_reports(small_generated, tmp_path):
    config = RunConfig(hyper=FAST_HYPER, k_grid=[5, 20], seeds=[0, 1], out=str(tmp_path), dump_vocabulary=True)
    report = run_experiment(small_generated, config, "digest")

    task1 = pd.read_csv(tmp_path / "task1_report.csv", keep_default_na=False)
    assert list(task1.columns) == TASK1_COLUMNS
    assert task1["group"].tolist() == ["methods"] * 4 + ["features"] * 3
    assert task1["method"].tolist()[:4] == ["baseline", "logreg", "gbt", "svm"]
    assert task1["variant"].tolist()[0] == "majority_class"
    assert task1["feature_set"].tolist()[4:] == ["base", "base+prior", "base+prior+gpa"]
    assert (task1["tp"] + task1["fp"] + task1["tn"] + task1["fn"] == 2 * 300).all()

    task2 = pd.read_csv(tmp_path / "task2_map.csv")
    assert list(task2.columns) == TASK2_COLUMNS
    assert len(task2) == (4 + 3) * 2
    assert task2["k"].tolist()[:2] == [5, 20]
    assert ((task2["map"] >= 0) & (task2["map"] <= 1)).all()
    assert task2["feature_set"].tolist()[-1] == "base+ht+dept"
    assert task2[task2["group"] == "features"]["method"].unique().tolist() == ["logreg"]

    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "eval"
    assert manifest["dataset_digest"] == "digest"
    assert manifest["seeds"] == [0, 1]
    assert "task2_map.csv" in manifest["outputs"]
    assert manifest["summary"]["best_method"] in {"baseline", "logreg", "gbt", "svm"}
    assert "ratio_at_k20" in manifest["summary"]
    assert (tmp_path / "vocabulary.csv").is_file()
    assert report.summary == manifest["summary"]


def test_saved_models_reproduce_on_the_fly_results(small_generated, tmp_path):
    common = dict(
        hyper=FAST_HYPER,
        methods=[Method.LOGREG, Method.GBT],
        tasks=[Task.OPPORTUNITY],
        k_grid=[10],
        seeds=[2],
    )
    TrainModelsFlow(RunConfig(**common, out=str(tmp_path / "train")), small_generated).train_all()

    fly = RunExperimentFlow(RunConfig(**common), small_generated).run()
    saved = RunExperimentFlow(
        RunConfig(**common, models_dir=str(tmp_path / "train" / "models"), train_on_the_fly=False), small_generated
    ).run()
    assert saved.task2 == fly.task2


def test_baseline_map_is_per_seed_and_cached(small_generated):
    flow = RunExperimentFlow(RunConfig(tasks=[Task.OPPORTUNITY], k_grid=[5, 50]), small_generated)
    first = flow.baseline_map(0)
    assert flow.baseline_map(0) is first
    assert 0.0 <= first[5] <= 1.0
    assert flow.baseline_map(1) != first


def test_loaded_models_are_checked_against_the_run(tiny_dataset, tmp_path, caplog):
    common = dict(methods=[Method.LOGREG], tasks=[Task.OPPORTUNITY], feature_sets=[FeatureLevel.BASE], seeds=[0])
    TrainModelsFlow(RunConfig(**common, out=str(tmp_path)), tiny_dataset, "abc").train_all()
    models = tmp_path / "models"

    flow = RunExperimentFlow(
        RunConfig(**common, cutoff="2014.2", models_dir=str(models), train_on_the_fly=False), tiny_dataset, "def"
    )
    with caplog.at_level(logging.WARNING):
        model = flow.model(Task.OPPORTUNITY, Method.LOGREG, FeatureLevel.BASE, 0)
    assert model.metadata["cutoff"] == "2014.1"
    assert "trained with cutoff 2014.1, this run uses 2014.2" in caplog.text
    assert "trained on another dataset" in caplog.text

    shutil.copy(
        models / model_file_name(Task.OPPORTUNITY, Method.LOGREG, FeatureLevel.BASE),
        models / model_file_name(Task.OPPORTUNITY, Method.LOGREG, FeatureLevel.BASE_PLUS),
    )
    with pytest.raises(FeatureMismatchException):
        flow.model(Task.OPPORTUNITY, Method.LOGREG, FeatureLevel.BASE_PLUS, 0)

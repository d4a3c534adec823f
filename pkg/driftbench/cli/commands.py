import glob
import os.path as osp
from typing import List

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from driftbench.cli.config import RunConfig, int_list, split_list
from driftbench.datasets import (SparseDataset, SynthSpec, corpus_summary,
                                 date_to_day, day_to_date, generate,
                                 load_corpus, load_feature_files,
                                 load_manifest, load_sparse, save_corpus,
                                 save_sparse, write_feature_files,
                                 write_manifest)
from driftbench.errors import ConfigError
from driftbench.features import (rank_and_select, save_vocabulary,
                                 vectorize)
from driftbench.metrics import evaluate
from driftbench.models import FAMILIES
from driftbench.splits import (Window, check_no_leakage, make_batches,
                               month_index, monthly_to_dict, plan_monthly,
                               plan_to_dict, plan_windows, window_rows)
from driftbench.training import (ActiveConfig, Grid, evaluate_static,
                                 grid_search, run_active_loop)
from driftbench.utils import (BunchDict, config_hash, derive_seed,
                              get_logger, read_json, write_csv, write_json)
from driftbench.version import __version__

logger = get_logger(__name__)

WINDOW_COLUMNS = ['window', 'model', 'precision', 'recall', 'f1', 'val_f1']


def portable(config: RunConfig) -> BunchDict:
    """The config as recorded in reports: thread count left out."""
    run = BunchDict({k: v for k, v in config.run.items() if k != 'threads'})
    return BunchDict(config, run=run)


def provenance(config: RunConfig, command: str) -> BunchDict:
    return BunchDict(tool='driftbench', version=__version__, command=command,
                     config_hash=config_hash(portable(config)),
                     seed=config.run.seed)


def report(config: RunConfig, command: str, **body) -> BunchDict:
    """A report document embedding provenance and the run config."""
    return BunchDict(meta=provenance(config, command),
                     config=portable(config), **body)


def stamp(config: RunConfig, command: str) -> str:
    meta = provenance(config, command)
    return (f"{meta.tool} {meta.version} command={command} "
            f"config_hash={meta.config_hash} seed={meta.seed}")


def out_path(config: RunConfig, name: str) -> str:
    return osp.join(config.run.out, name)


def cmd_ingest(config: RunConfig, n_jobs: int = 1) -> List[str]:
    """Manifest + feature files -> persisted corpus and its per-year
    summary."""
    if not config.corpus.manifest or not config.corpus.features:
        raise ConfigError("ingest needs --manifest and --features-dir.")
    records = load_manifest(config.corpus.manifest)
    corpus = load_feature_files(records, config.corpus.features,
                                n_jobs=n_jobs)
    summary = corpus_summary(corpus)
    logger.info("Corpus summary:\n" +
                summary.to_string(index=False))
    paths = [
        save_corpus(corpus, out_path(config, config.corpus.path)),
        write_csv(summary, out_path(config, 'corpus_summary.csv'),
                  comment=stamp(config, 'ingest')),
        write_json(
            report(config, 'ingest', apps=len(corpus),
                   malware=int(corpus.labels.sum()),
                   summary=summary.to_dict(orient='records')),
            out_path(config, 'ingest.json')),
    ]
    return paths


def training_cutoff(config: RunConfig, corpus) -> int:
    """First day excluded from the feature-ranking slice."""
    if config.features.train_end:
        return config_date(config.features.train_end,
                           "[features] train_end")
    if len(corpus) == 0:
        raise ConfigError("cannot rank features of an empty corpus.")
    first = month_index(corpus.timestamps[:1])[0]
    cutoff = np.datetime64(int(first + config.features.initial_span), 'M')
    return int(cutoff.astype('datetime64[D]').astype(np.int64))


def cmd_features(config: RunConfig, corpus_path: str) -> List[str]:
    """Rank features by MI, select ``top_n`` and vectorize the corpus."""
    corpus = load_corpus(corpus_path)
    scope = config.features.scope
    if scope == 'all':
        ranked, cutoff = corpus, None
    elif scope == 'train':
        cutoff = training_cutoff(config, corpus)
        ranked = corpus.before(cutoff)
    else:
        raise ConfigError(f"scope must be 'train' or 'all', got '{scope}'.")

    vocab = rank_and_select(ranked, config.features.top_n)
    dataset = vectorize(corpus, vocab)
    top = [
        BunchDict(index=e.index, feature=e.feature, mi=e.mi)
        for e in vocab.entries[:20]
    ]
    return [
        save_vocabulary(vocab, out_path(config, 'vocab.tsv')),
        save_sparse(dataset, out_path(config, 'dataset.sparse')),
        write_json(
            report(config, 'features', scope=scope,
                   cutoff=None if cutoff is None else day_to_date(cutoff),
                   ranked_apps=len(ranked), apps=len(dataset),
                   vocab_size=len(vocab), top_features=top),
            out_path(config, 'features.json')),
    ]


def run_window(dataset: SparseDataset, batches, window: Window,
               n_train: int, family: str, grid: Grid, seed: int,
               threshold: float) -> BunchDict:
    """Tune on the window's validation batch, evaluate on its test
    batch."""
    train, val, test = window_rows(batches, window)
    check_no_leakage(dataset, train, val)
    check_no_leakage(dataset, np.concatenate([train, val]), test)
    result = grid_search(grid, dataset.subset(train), dataset.subset(val),
                         seed=seed, threshold=threshold)
    metrics = evaluate(dataset.labels[test],
                       result.best.predict(dataset.X[test], threshold))
    return BunchDict(k=n_train, window=window.index, model=family,
                     precision=metrics.precision, recall=metrics.recall,
                     f1=metrics.f1, val_f1=result.best_f1,
                     hparams=result.best.hparams.tag(), test=metrics,
                     grid=result.table)


def cmd_windows(config: RunConfig, dataset_path: str,
                n_jobs: int = 1) -> List[str]:
    """Sliding-window experiments, one CSV per training size ``k``."""
    wcfg = config.windows
    families = split_list(wcfg.models)
    unknown = [f for f in families if f not in FAMILIES]
    if unknown or not families:
        raise ConfigError(f"unknown model(s) {unknown}, expected some of "
                          f"{FAMILIES}.")
    sizes = int_list(wcfg.train_batches, "train_batches")
    grids = {family: config.grid(family) for family in families}
    seed, threshold = config.run.seed, config.run.threshold

    dataset = load_sparse(dataset_path)
    batches = make_batches(dataset, wcfg.batch_size, wcfg.mal_per_batch)
    paths, results = [], []
    for k in sizes:
        plan = plan_windows(batches, k)
        paths.append(
            write_json(report(config, 'windows',
                              plan=plan_to_dict(dataset, batches, plan)),
                       out_path(config, f'plan_k{k}.json')))
        logger.info(f"k={k}: {len(plan)} window(s) x {len(families)} "
                    "model(s).")
        rows = Parallel(n_jobs=n_jobs, prefer="threads")(
            delayed(run_window)(dataset, batches, w, k, family,
                                grids[family],
                                derive_seed(seed, k, w.index,
                                            FAMILIES.index(family)),
                                threshold)
            for w in plan.windows for family in families)
        results.extend(rows)
        frame = pd.DataFrame(rows, columns=list(rows[0].keys()))
        paths.append(
            write_csv(frame[WINDOW_COLUMNS],
                      out_path(config, f'windows_k{k}.csv'),
                      comment=stamp(config, 'windows')))

    paths.append(
        write_json(report(config, 'windows', results=results),
                   out_path(config, 'windows.json')))
    return paths


def cmd_active(config: RunConfig, dataset_path: str,
               n_jobs: int = 1, verbose: int = 0) -> List[str]:
    """Monthly active learning, one trace per budget, next to the
    train-once baseline."""
    acfg = config.active
    family = acfg.model
    if family not in FAMILIES:
        raise ConfigError(f"unknown model '{family}', expected one of "
                          f"{FAMILIES}.")
    budgets = int_list(acfg.budget, "budget")
    grid = [hp.without_family() for hp in config.grid(family).candidates]

    dataset = load_sparse(dataset_path)
    split = plan_monthly(dataset, acfg.initial_span)
    paths = [
        write_json(report(config, 'active', plan=monthly_to_dict(split)),
                   out_path(config, 'monthly_plan.json'))
    ]

    def make_config(budget: int) -> ActiveConfig:
        return ActiveConfig(family=family, grid=grid, budget=budget,
                            threshold=config.run.threshold,
                            seed=config.run.seed,
                            weighting=acfg.weighting, retune=acfg.retune,
                            n_jobs=n_jobs)

    static = evaluate_static(make_config(0), split, dataset)
    for budget in budgets:
        trace = run_active_loop(make_config(budget), split, dataset,
                                verbose=verbose)
        paths.append(
            write_json(
                report(config, 'active', trace=trace.to_dict(),
                       static=BunchDict(averages=static.averages,
                                        months=static.months)),
                out_path(config, f'active_{family}_b{budget}.json')))
    return paths


def config_date(raw: str, name: str) -> int:
    try:
        return date_to_day(str(raw).strip())
    except ValueError:
        raise ConfigError(f"{name} must be a YYYY-MM-DD date, "
                          f"got '{raw}'.") from None


def parse_drift(raw: str):
    """``'2013-01-01:40, 2013-07-01:20'`` -> ``[(day, 40), (day, 20)]``."""
    events = []
    for item in split_list(raw):
        date, _, rotation = item.partition(':')
        try:
            events.append((date_to_day(date.strip()), int(rotation)))
        except ValueError:
            raise ConfigError(f"drift events look like 'YYYY-MM-DD:<shift>',"
                              f" got '{item}'.") from None
    return events


def cmd_synth(config: RunConfig, n_jobs: int = 1) -> List[str]:
    """Synthetic manifest + feature files."""
    s = config.synth
    spec = SynthSpec.build(seed=config.run.seed, n_apps=s.n_apps,
                           malware_ratio=s.malware_ratio,
                           vocab_size=s.vocab_size,
                           n_informative=s.n_informative,
                           p_informative=s.p_informative,
                           p_background=s.p_background,
                           drift=parse_drift(s.drift),
                           start_day=config_date(s.start, "[synth] start"),
                           span_days=s.span_days)
    synth = generate(spec, n_jobs=n_jobs)
    return [
        write_manifest(synth.records, out_path(config, 'manifest.csv')),
        write_feature_files(synth.records, synth.features,
                            out_path(config, 'features')),
        write_json(
            report(config, 'synth', apps=len(synth.records),
                   malware=sum(r.label for r in synth.records),
                   drift=[
                       BunchDict(date=day_to_date(day), rotation=rotation)
                       for day, rotation in spec.drift
                   ]), out_path(config, 'synth.json')),
    ]


def cmd_report(config: RunConfig, run_dir: str) -> List[str]:
    """Consolidate the window and active-learning results of a run
    directory into ``report.json`` plus CSV tables."""
    windows_file = osp.join(run_dir, 'windows.json')
    active_files = sorted(glob.glob(osp.join(run_dir, 'active_*.json')))
    if not osp.isfile(windows_file) and not active_files:
        raise ConfigError(f"no windows.json or active_*.json in "
                          f"'{run_dir}'.")

    paths, body = [], BunchDict(sources=[])
    comment = stamp(config, 'report')
    if osp.isfile(windows_file):
        body.sources.append('windows.json')
        frame = pd.DataFrame(read_json(windows_file)['results'])
        table = frame[['k'] + WINDOW_COLUMNS].sort_values(['k', 'window',
                                                           'model'])
        plot = table.pivot_table(index=['k', 'window'], columns='model',
                                 values='f1').reset_index()
        plot.columns.name = None
        summary = table.groupby(['k', 'model'], sort=True)[[
            'precision', 'recall', 'f1', 'val_f1'
        ]].mean().mul(100).round(2).reset_index()
        body.windows = summary.to_dict(orient='records')
        paths.append(write_csv(table, osp.join(run_dir, 'windows_table.csv'),
                               comment=comment))
        paths.append(write_csv(plot, osp.join(run_dir, 'plot_f1.csv'),
                               comment=comment))

    if active_files:
        rows = []
        for path in active_files:
            doc = read_json(path)
            trace, static = doc['trace'], doc['static']
            body.sources.append(osp.basename(path))
            rows.append(
                dict(model=trace['config']['family'],
                     budget=trace['config']['budget'],
                     fnr=trace['averages']['fnr'],
                     fpr=trace['averages']['fpr'],
                     f1=trace['averages']['f1'],
                     static_fnr=static['averages']['fnr'],
                     static_fpr=static['averages']['fpr'],
                     static_f1=static['averages']['f1']))
        active = pd.DataFrame(rows).sort_values(['model', 'budget'])
        body.active = active.to_dict(orient='records')
        paths.append(write_csv(active, osp.join(run_dir, 'active_table.csv'),
                               comment=comment))

    paths.append(
        write_json(report(config, 'report', **body),
                   osp.join(run_dir, 'report.json')))
    return paths

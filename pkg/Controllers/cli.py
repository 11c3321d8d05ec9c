import json
import logging
from pathlib import Path

from Controllers.Calibration import calibration_run
from Controllers.Committee import aggregate_usage, run_audit
from Controllers.DatasetReader import load_dataset, load_manifest
from Controllers.FaceSymmetry import load_landmarks, symmetry_records, write_symmetry
from Controllers.Plots import render_groups, render_significance, render_trend
from Controllers.Synth import generate_pipeline_fixture, generate_scm_dataset, write_fixture, write_scm_sample
from Controllers.TableWriter import TableFormat, export_table, skipped_log, write_table
from Controllers.TrendStats import (
    accuracy_text, binary_group_summary, sliding_gaussian_trend, subpopulation_accuracy,
    write_accuracy, write_groups, write_trend,
)
from Models.Configs import AuditConfig
from Models.Dataset import stratify
from Models.Errors import EXIT_INSUFFICIENT, EXIT_OK, DomainError, InsufficientDataError, ParseError, SchemaError
from Models.RunManifest import RunManifest
from Models.Scm import ScmKind, ScmSpec
from Utils import atomic_write, file_digest

log = logging.getLogger(__name__)

# flags that never change what a command writes
UNRECORDED = ('command', 'config', 'verbose', 'jobs', 'out')


def load_config(path):
    """
    :returns: flag defaults from a JSON object; a run manifest contributes
              its recorded config
    """

    try:
        with open(path, 'r', encoding='utf-8') as file:
            data = json.load(file)
    except json.JSONDecodeError as e:
        raise ParseError(f'config {path} is not valid JSON: {e}')

    if not isinstance(data, dict):
        raise ParseError(f'config {path} must hold a JSON object')
    if 'command' in data and isinstance(data.get('config'), dict):
        try:
            return dict(RunManifest.from_dict(data).config)
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f'run manifest {path} is incomplete: {e}')
    return data


class Cli:

    def __init__(self, args):
        self.args = args
        self.out = Path(args.out)
        self.handlers = {
            'audit': self.cmd_audit,
            'accuracy': self.cmd_accuracy,
            'trend': self.cmd_trend,
            'symmetry': self.cmd_symmetry,
            'calibrate': self.cmd_calibrate,
            'fixture': self.cmd_fixture,
        }

    def run(self):
        handler = self.handlers.get(self.args.command)
        if handler is None:
            raise DomainError(f'unknown command {self.args.command!r}; expected one of {sorted(self.handlers)}')
        return handler()

    def audit_config(self):
        return AuditConfig(
            alpha=self.args.alpha,
            mode=self.args.mode,
            tests=tuple(self.args.tests),
            consensus=self.args.consensus,
            correction=self.args.correction,
            B=self.args.B,
            seed=self.args.seed,
            min_stratum=self.args.min_stratum,
        )

    def scm_spec(self):
        return ScmSpec(
            kind=self.args.kind,
            n=self.args.n,
            effect_size=self.args.effect_size,
            noise_std=self.args.noise_std,
            property_kind=self.args.property_kind,
            classes=self.args.classes,
            seed=self.args.seed,
        )

    def load(self):
        manifest = load_manifest(self.args.manifest)
        return load_dataset(self.args.data, manifest), manifest

    def write_run_manifest(self, inputs=()):
        config = {k: v for k, v in vars(self.args).items() if k not in UNRECORDED}
        manifest = RunManifest(
            command=self.args.command,
            config=config,
            seed=self.args.seed,
            inputs={str(path): file_digest(path) for path in inputs},
        )
        return atomic_write(self.out / 'run_manifest.json', manifest.to_json())

    def cmd_audit(self):
        dataset, manifest = self.load()
        table = run_audit(dataset, manifest, self.audit_config(), self.args.run_label, self.args.jobs)

        formats = list(TableFormat) if self.args.format == 'all' else [TableFormat(self.args.format)]
        for format in formats:
            write_table(table, self.out, format)
        atomic_write(self.out / 'skipped.json', skipped_log(table))
        if self.args.svg:
            render_significance(table, self.out / 'significance.svg')
        self.write_run_manifest([self.args.data, self.args.manifest])

        summary = aggregate_usage(table)
        print(export_table(table, TableFormat.text_grid), end='')
        print(summary)

        if summary.tested == 0:
            log.error('no cell could be tested; see %s', self.out / 'skipped.json')
            return EXIT_INSUFFICIENT
        return EXIT_OK

    def cmd_accuracy(self):
        dataset, _ = self.load()
        table = subpopulation_accuracy(dataset, self.args.group_by, self.args.classes or None)

        write_accuracy(table, self.out / 'accuracy.csv')
        self.write_run_manifest([self.args.data, self.args.manifest])
        print(accuracy_text(table), end='')
        return EXIT_OK

    def _trend_pair(self, dataset, abbreviation, class_name):
        spec = dataset.spec(abbreviation)
        if spec is None:
            raise SchemaError(f'unknown property {abbreviation!r}', column=abbreviation)

        stratum = stratify(dataset, dataset.class_index(class_name), self.args.min_stratum)
        x = stratum.properties[abbreviation]
        y = stratum.logit(dataset.class_index(class_name))
        stem = f'{abbreviation}_{class_name}'

        if spec.is_binary:
            summaries = binary_group_summary(x, y)
            path = write_groups(summaries, self.out / f'groups_{stem}.json')
            if self.args.svg:
                render_groups(summaries, self.out / f'groups_{stem}.svg', stem)
        else:
            curve = sliding_gaussian_trend(x, y, self.args.window_frac, self.args.stride_frac)
            path = write_trend(curve, self.out / f'trend_{stem}.csv')
            if self.args.svg:
                render_trend(curve, self.out / f'trend_{stem}.svg', stem)
        return path

    def cmd_trend(self):
        dataset, manifest = self.load()
        properties = [self.args.property] if self.args.property else [p.abbreviation for p in manifest.properties]
        classes = [self.args.class_name] if self.args.class_name else list(dataset.class_names)
        single = len(properties) == 1 and len(classes) == 1

        written = []
        for abbreviation in properties:
            for class_name in classes:
                try:
                    written.append(self._trend_pair(dataset, abbreviation, class_name))
                except InsufficientDataError as e:
                    if single:
                        raise
                    log.warning('skipping %s/%s: %s', abbreviation, class_name, e)

        self.write_run_manifest([self.args.data, self.args.manifest])
        for path in written:
            print('Wrote', path)
        return EXIT_OK if written else EXIT_INSUFFICIENT

    def cmd_symmetry(self):
        records = symmetry_records(load_landmarks(self.args.landmarks), self.args.images)
        path = write_symmetry(records, self.out / 'symmetry.csv')
        self.write_run_manifest([self.args.landmarks])
        print(f'Wrote {len(records)} records to {path}')
        return EXIT_OK

    def cmd_calibrate(self):
        spec = self.scm_spec()
        if spec.kind == ScmKind.pipeline_fixture:
            raise DomainError('calibration runs on the null_common_cause or direct_dependence kinds')

        report = calibration_run(self.args.tests, spec, self.args.trials, self.args.alpha,
                                 B=self.args.B, jobs=self.args.jobs)
        atomic_write(self.out / 'calibration.json', json.dumps(report.to_dict(), indent=2) + '\n')
        self.write_run_manifest()

        for name, rate in report.rates.items():
            print(f'{name}: {rate.rejections}/{rate.completed} = {rate.rate:.3f} '
                  f'[{rate.ci_low:.3f}, {rate.ci_high:.3f}], KS p={rate.ks_p_value}, '
                  f'{len(rate.failures)} failures')
        return EXIT_OK

    def cmd_fixture(self):
        spec = self.scm_spec()
        if spec.kind == ScmKind.pipeline_fixture:
            paths = write_fixture(generate_pipeline_fixture(spec), self.out)
        else:
            paths = write_scm_sample(generate_scm_dataset(spec), self.out)

        self.write_run_manifest()
        for path in paths:
            print('Wrote', path)
        return EXIT_OK

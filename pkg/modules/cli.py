"""
Command-line front end.

Every command prints JSON (or CSV with --format csv) on stdout; log lines go
to stderr. Exit codes: 0 success, 2 input or usage error, 3 computed-result
diagnostic such as a non-positive reconstruction.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from modules import config, serialize
from modules.contextuality import maximize_sigma, probability_sum, sigma_from_data, sigma_from_kd, violation_criterion
from modules.errors import DegenerateFrame, NotPositive, PentagonError, StateSpecError
from modules.hilbert import eigenvalues, trace_distance
from modules.kd import (
    bargmann_invariant,
    check_determinism,
    eleven_terms,
    kd_table,
    marginal_residual,
    negative_terms,
    verify_identities,
)
from modules.pentagon import (
    CONTEXT_ORDER,
    OUTCOMES,
    PentagonFrame,
    extra_orthogonalities,
    graph_edges,
    inner_product_relations,
    orthogonality_graph,
    paths,
    reflectivities,
)
from modules.sim.experiments import counts_to_frame, run_inequality_experiment, run_tomography_experiment
from modules.states import FrameSpec, ResolvedState, resolve_state
from modules.tomography import (
    complete_table,
    derived_probabilities,
    extract,
    reconstruct_matrix,
    red_from_state,
    red_to_data,
)
from modules.weakvalues import fluctuation, outcome_value_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DIAGNOSTIC = 3


def _emit(document: Any) -> None:
    sys.stdout.write(serialize.dumps(document) + "\n")


def _frame_spec(args: argparse.Namespace) -> FrameSpec:
    return FrameSpec(args.frame, args.theta1, args.theta2)


def _state(args: argparse.Namespace, frame: PentagonFrame) -> ResolvedState:
    return resolve_state(args.state, frame)


def frame_summary(frame: PentagonFrame) -> Dict[str, Any]:
    adjacency = orthogonality_graph(frame)
    identities = verify_identities(frame)
    first, second = inner_product_relations(frame)
    return {
        "frame": serialize.frame_to_json(frame),
        "reflectivities": reflectivities(frame).as_dict(),
        "orthogonality_graph": {
            "edges": [list(e) for e in graph_edges(adjacency)],
            "extra_edges": [list(e) for e in extra_orthogonalities(frame)],
        },
        "paths": {p.path.key: list(p.path.assignment) for p in paths(frame)},
        "identity_residuals": identities.residuals,
        "inner_product_relations": [first, second],
        "bargmann_invariant": serialize.pair(bargmann_invariant(frame)),
    }


class ScenarioReport:
    """Everything the toolkit computes for one state, with a run summary."""

    def __init__(
        self,
        state: ResolvedState,
        frame: PentagonFrame,
        canonical: bool,
        maximize: bool = False,
        seed: int = 0,
    ):
        self.state = state
        self.frame = frame
        self.canonical = canonical
        self.maximize = maximize
        self.seed = seed
        self.stats = {
            'sections': 0,
            'negative_terms': 0,
            'undefined_rows': 0,
        }

    def _section(self, document: Dict[str, Any], name: str, value: Any) -> None:
        document[name] = value
        self.stats['sections'] += 1

    def kd_section(self) -> Dict[str, Any]:
        rho, frame = self.state.rho, self.frame
        terms = eleven_terms(rho, frame)
        negative = negative_terms(terms)
        self.stats['negative_terms'] = len(negative)
        section = {
            "table": serialize.table_to_json(kd_table(rho, frame)),
            "eleven": serialize.eleven_to_json(terms),
            "negative": negative,
            "total": serialize.pair(terms.total()),
            "marginal_residual": marginal_residual(terms, rho, frame),
            "determinism_sums": [serialize.pair(s) for s in check_determinism(terms, frame).sums],
        }
        if self.canonical:
            completion = complete_table(red_from_state(rho, frame))
            section["completion"] = {
                "rho_3P2": serialize.pair(completion.r_3P2),
                "rho_2P2": serialize.pair(completion.r_2P2),
                "rho_3S2": serialize.pair(completion.r_3S2),
            }
        return section

    def tomography_section(self) -> Dict[str, Any]:
        data = extract(self.state.rho, self.frame)
        section = {
            "data": serialize.data_to_json(data),
            "red": serialize.red_to_json(red_from_state(self.state.rho, self.frame)),
        }
        if self.canonical:
            section["derived_probabilities"] = derived_probabilities(data)._asdict()
        matrix = reconstruct_matrix(data, self.frame)
        section["roundtrip_trace_distance"] = trace_distance(matrix, self.state.rho)
        return section

    def sigma_section(self) -> Dict[str, Any]:
        rho, frame = self.state.rho, self.frame
        section = serialize.sigma_to_json(probability_sum(rho, frame))
        section["from_kd"] = sigma_from_kd(eleven_terms(rho, frame))
        if self.canonical:
            lhs, violated = violation_criterion(red_from_state(rho, frame))
            section["from_data"] = sigma_from_data(extract(rho, frame))
            section["criterion"] = {"lhs": lhs, "violated": violated}
        return section

    def weak_section(self) -> Dict[str, Any]:
        section = {}
        for context in CONTEXT_ORDER:
            table = outcome_value_table(self.state.rho, context, self.frame, state_label=self.state.label)
            self.stats['undefined_rows'] += sum(1 for row in table.rows if not row.defined)
            section[context] = {
                "table": serialize.outcome_table_to_json(table),
                "fluctuations": {
                    b: serialize.fluctuation_to_json(
                        fluctuation(self.state.rho, b, context, self.frame, skip_undefined=True)
                    )
                    for b in OUTCOMES
                },
            }
        return section

    def run(self) -> Dict[str, Any]:
        logger.info(f"Building report for state {self.state.label}...")
        document: Dict[str, Any] = {"state": self.state.label}
        self._section(document, "frame", frame_summary(self.frame))
        self._section(document, "kd", self.kd_section())
        self._section(document, "tomography", self.tomography_section())
        self._section(document, "inequality", self.sigma_section())
        self._section(document, "weak", self.weak_section())
        if self.maximize:
            self._section(document, "maximum", serialize.maximization_to_json(maximize_sigma(self.frame, seed=self.seed)))

        logger.info("=== Report completed ===")
        logger.info(f"  Sections: {self.stats['sections']}")
        logger.info(f"  Negative KD terms: {self.stats['negative_terms']}")
        logger.info(f"  Undefined weak-value rows: {self.stats['undefined_rows']}")
        return document


# --- commands


def cmd_contexts(args: argparse.Namespace) -> int:
    frame = _frame_spec(args).resolve()
    _emit(frame_summary(frame))
    return EXIT_OK


def cmd_kd(args: argparse.Namespace) -> int:
    frame = _frame_spec(args).resolve()
    state = _state(args, frame)
    show_table = args.table or not args.eleven
    show_eleven = args.eleven or not args.table
    table = kd_table(state.rho, frame)
    terms = eleven_terms(state.rho, frame)

    if args.format == "csv":
        frames = []
        if show_table:
            frames.append(serialize.table_to_frame(table))
        if show_eleven:
            frames.append(serialize.eleven_to_frame(terms))
        serialize.write_csv(frames, sys.stdout)
        return EXIT_OK

    document: Dict[str, Any] = {"state": state.label, "frame": _frame_spec(args).label}
    if show_table:
        document["table"] = serialize.table_to_json(table)
    if show_eleven:
        document["eleven"] = serialize.eleven_to_json(terms)
        document["negative"] = negative_terms(terms)
    _emit(document)
    return EXIT_OK


def _load_red(path: str):
    try:
        document = json.loads(Path(path).read_text())
    except OSError as e:
        raise StateSpecError(f"cannot read red entries {path}: {e}")
    except json.JSONDecodeError as e:
        raise StateSpecError(f"red entries file {path} is not valid JSON: {e}")
    return serialize.red_from_json(document)


def cmd_reconstruct(args: argparse.Namespace) -> int:
    frame = _frame_spec(args).resolve()
    state: Optional[ResolvedState] = None
    if args.red:
        data = red_to_data(_load_red(args.red))
    elif args.state:
        state = _state(args, frame)
        data = extract(state.rho, frame)
    else:
        raise StateSpecError("reconstruct needs --red FILE or --state SPEC")

    matrix = reconstruct_matrix(data, frame)
    lowest = float(eigenvalues(matrix)[0])
    positive = lowest >= -config.PSD_TOLERANCE
    document: Dict[str, Any] = {
        "data": serialize.data_to_json(data),
        "density": serialize.matrix_to_json(matrix),
        "positive": positive,
        "min_eigenvalue": lowest,
    }
    if state is not None and args.roundtrip:
        document["trace_distance"] = trace_distance(matrix, state.rho)
    if not positive:
        document["diagnosis"] = str(NotPositive(lowest))
    _emit(document)
    if not positive:
        logger.error(f"Reconstructed matrix is not a state (eigenvalue {lowest:.6g})")
        return EXIT_DIAGNOSTIC
    return EXIT_OK


def cmd_inequality(args: argparse.Namespace) -> int:
    frame_spec = _frame_spec(args)
    frame = frame_spec.resolve()
    state = _state(args, frame)
    report = ScenarioReport(state, frame, canonical=frame_spec.kind == "canonical")
    document = report.sigma_section()
    document["state"] = state.label
    _emit(document)
    return EXIT_OK


def cmd_weak(args: argparse.Namespace) -> int:
    frame = _frame_spec(args).resolve()
    state = _state(args, frame)
    table = outcome_value_table(state.rho, args.context, frame, state_label=state.label)
    targets = [args.target] if args.target else list(OUTCOMES)
    reports = [fluctuation(state.rho, b, args.context, frame, skip_undefined=True) for b in targets]

    if args.format == "csv":
        serialize.write_csv([serialize.outcome_table_to_frame(table)], sys.stdout)
        return EXIT_OK

    document = serialize.outcome_table_to_json(table)
    if args.target:
        document["target"] = args.target
        document["target_values"] = [
            None if row.values is None else serialize.pair(row.values[args.target]) for row in table.rows
        ]
    document["fluctuations"] = {r.b: serialize.fluctuation_to_json(r) for r in reports}
    _emit(document)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    frame = _frame_spec(args).resolve()
    state = _state(args, frame)
    if args.experiment == "tomography":
        report = run_tomography_experiment(state.rho, args.shots, args.seed, frame)
        document = serialize.estimation_to_json(report)
    else:
        report = run_inequality_experiment(state.rho, args.shots, args.seed, frame)
        document = serialize.inequality_to_json(report)

    if args.format == "csv":
        serialize.write_csv([counts_to_frame(report.settings)], sys.stdout)
    else:
        document["state"] = state.label
        document["experiment"] = args.experiment
        _emit(document)
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    frame_spec = _frame_spec(args)
    frame = frame_spec.resolve()
    state = _state(args, frame)
    report = ScenarioReport(
        state, frame, canonical=frame_spec.kind == "canonical", maximize=args.maximize, seed=args.seed
    )
    _emit(report.run())
    return EXIT_OK


# --- argument parsing


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}")
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--frame", choices=["canonical", "angles"], default="canonical")
    common.add_argument("--theta1", type=float, help="angle of |S1> in the (|2>,|3>) plane, radians")
    common.add_argument("--theta2", type=float, help="angle of |S2> in the (|1>,|3>) plane, radians")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--log-level", default=config.LOG_LEVEL,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper)

    parser = argparse.ArgumentParser(
        prog="run_pentagon.py",
        description="Kirkwood-Dirac analysis of the five-context qutrit scenario",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("contexts", parents=[common], help="frame, reflectivities and operator identities")
    p.set_defaults(func=cmd_contexts)

    p = sub.add_parser("kd", parents=[common], help="KD table and eleven-path distribution")
    p.add_argument("--state", required=True)
    p.add_argument("--table", action="store_true")
    p.add_argument("--eleven", action="store_true")
    p.set_defaults(func=cmd_kd)

    p = sub.add_parser("reconstruct", parents=[common], help="state from five tomographic coefficients")
    p.add_argument("--state")
    p.add_argument("--red", help="JSON file with rho_1f, rho_2f, rho_3f, rho_1S2, rho_1P2")
    p.add_argument("--roundtrip", action="store_true")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("inequality", parents=[common], help="sum of the five shared-outcome probabilities")
    p.add_argument("--state", required=True)
    p.set_defaults(func=cmd_inequality)

    p = sub.add_parser("weak", parents=[common], help="contextual outcome values W(b|a)")
    p.add_argument("--state", required=True)
    p.add_argument("--context", required=True, choices=list(CONTEXT_ORDER))
    p.add_argument("--target", choices=list(OUTCOMES))
    p.set_defaults(func=cmd_weak)

    p = sub.add_parser("simulate", parents=[common], help="finite-shot experiment")
    p.add_argument("--state", required=True)
    p.add_argument("--experiment", choices=["tomography", "inequality"], default="tomography")
    p.add_argument("--shots", type=_positive_int, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", parents=[common], help="consolidated report for one state")
    p.add_argument("--state", required=True)
    p.add_argument("--maximize", action="store_true", help="also search for the largest Sigma")
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format='%(asctime)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (StateSpecError, DegenerateFrame) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_INPUT
    except PentagonError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_DIAGNOSTIC
    except KeyboardInterrupt:
        logger.info("Process interrupted by user")
        return 1


/**
 * TypeScript bindings for the `relab` command-line tool.
 *
 * Every function here is a thin wrapper: arrays in, plain records out.
 * No numerical logic lives in this layer — each call shells out to the
 * `relab` executable, which emits a self-describing JSON report, and the
 * parsed `result` record is returned untouched. Seeds are always passed
 * explicitly so results are reproducible byte-for-byte.
 */
import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface RelabReport<T> {
  tool: string;
  version: string;
  command: string;
  seed: number;
  base: string;
  input_sha256: string;
  result: T;
}

export type Base = "nats" | "bits" | "baseN";

export class RelabError extends Error {
  constructor(
    message: string,
    public readonly exitCode: number,
    public readonly stderr: string,
  ) {
    super(message);
    this.name = "RelabError";
  }
}

const RELAB_BIN = process.env.RELAB_BIN ?? "relab";

/** Run the CLI and return raw stdout. Throws RelabError on nonzero exit. */
export function runCliRaw(args: string[]): string {
  const proc = spawnSync(RELAB_BIN, args, {
    encoding: "utf8",
    maxBuffer: 256 * 1024 * 1024,
  });
  if (proc.error) {
    throw new RelabError(
      `failed to launch ${RELAB_BIN}: ${proc.error.message}`,
      -1,
      "",
    );
  }
  if (proc.status !== 0) {
    throw new RelabError(
      `relab ${args[0]} exited with code ${proc.status}: ${proc.stderr.trim()}`,
      proc.status ?? -1,
      proc.stderr,
    );
  }
  return proc.stdout;
}

/** Run the CLI and parse the JSON report. */
export function runCli<T>(args: string[]): RelabReport<T> {
  return JSON.parse(runCliRaw(args)) as RelabReport<T>;
}

interface CommonOptions {
  base?: Base;
  seed?: number;
}

function commonArgs(opts: CommonOptions): string[] {
  const args: string[] = [];
  if (opts.base !== undefined) args.push("--base", opts.base);
  if (opts.seed !== undefined) args.push("--seed", String(opts.seed));
  return args;
}

/** Write `content` to a temp file, run `fn` on its path, always clean up. */
function withTempFile<T>(
  name: string,
  content: string,
  fn: (path: string) => T,
): T {
  const dir = mkdtempSync(join(tmpdir(), "relab-bindings-"));
  const path = join(dir, name);
  try {
    writeFileSync(path, content);
    return fn(path);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

function labelsContent(labels: ReadonlyArray<string | number>): string {
  if (labels.length === 0) throw new RangeError("labels must be non-empty");
  return labels.map(String).join("\n") + "\n";
}

export interface PowerLawFit {
  mu: number;
  intercept: number;
  stderr: number;
  points_used: number;
}

export interface AnalyzeResult {
  n: number;
  m: number;
  resolution: number;
  relevance: number;
  noise: number;
  fit: PowerLawFit;
  zipf: { mu_deviation: number; frontier_deficit: number };
}

export interface AnalyzeOptions extends CommonOptions {
  minMass?: number;
}

/** Resolution, relevance and noise of a sample of discrete labels. */
export function analyze(
  labels: ReadonlyArray<string | number>,
  opts: AnalyzeOptions = {},
): RelabReport<AnalyzeResult> {
  const args = ["analyze"];
  if (opts.minMass !== undefined) args.push("--min-mass", String(opts.minMass));
  return withTempFile("labels.txt", labelsContent(labels), (path) =>
    runCli<AnalyzeResult>([args[0]!, path, ...args.slice(1), ...commonArgs(opts)]),
  );
}

export interface CountResult {
  n: number;
  m: number;
  log_ws: number;
  log_wk: number;
  log_ws_given_k: number;
  log_wm: number;
}

/** Exact log-counts of samples compatible with the degeneracy profile. */
export function countProfile(
  labels: ReadonlyArray<string | number>,
  opts: CommonOptions = {},
): RelabReport<CountResult> {
  return withTempFile("labels.txt", labelsContent(labels), (path) =>
    runCli<CountResult>(["count", path, ...commonArgs(opts)]),
  );
}

export interface PartitionsResult {
  n: number;
  bins: number;
  n_partitions: number;
  density: Array<{ resolution: number; relevance: number; count: number }>;
}

/** Integer-partition count (and statistics) for n. */
export function partitions(
  n: number,
  opts: CommonOptions & { bins?: number } = {},
): RelabReport<PartitionsResult> {
  const args = ["partitions", "--n", String(n)];
  if (opts.bins !== undefined) args.push("--bins", String(opts.bins));
  return runCli<PartitionsResult>([...args, ...commonArgs(opts)]);
}

export interface FrontierOptions extends CommonOptions {
  muGrid?: ReadonlyArray<number>;
  /** Integer state-space sizes for the random baseline. */
  baseline?: ReadonlyArray<number>;
  replicas?: number;
}

/** Maximum-relevance frontier at sample size n. */
export function frontier(
  n: number,
  opts: FrontierOptions = {},
): RelabReport<Record<string, unknown>> {
  const args = ["frontier", "--n", String(n)];
  if (opts.muGrid) args.push("--mu-grid", ...opts.muGrid.map(String));
  if (opts.baseline) args.push("--baseline", ...opts.baseline.map(String));
  if (opts.replicas !== undefined) args.push("--replicas", String(opts.replicas));
  return runCli<Record<string, unknown>>([...args, ...commonArgs(opts)]);
}

export interface MsrOptions extends CommonOptions {
  tMax?: number;
  grid?: ReadonlyArray<number>;
  phases?: number;
}

export interface MsrResult {
  msr: number;
  [extra: string]: unknown;
}

/** Multiscale relevance of a spike train (event times in [0, tMax]). */
export function msr(
  times: ReadonlyArray<number>,
  opts: MsrOptions = {},
): RelabReport<MsrResult> {
  if (times.length === 0) throw new RangeError("times must be non-empty");
  const tMax = opts.tMax ?? Math.max(...times);
  const header = `# T=${tMax}\n`;
  const body = times.map((t) => t.toPrecision(17)).join("\n") + "\n";
  const args = ["msr"];
  if (opts.grid) args.push("--grid", ...opts.grid.map(String));
  if (opts.phases !== undefined) args.push("--phases", String(opts.phases));
  return withTempFile("spikes.txt", header + body, (path) =>
    runCli<MsrResult>([args[0]!, path, ...args.slice(1), ...commonArgs(opts)]),
  );
}

export interface ClusterOptions extends CommonOptions {
  algos?: ReadonlyArray<"s" | "c" | "a">;
  metric?: "l1" | "l2";
  truth?: string;
  criterion?: "INFOMAX" | "RELEMAX";
  k?: number;
}

/**
 * Rank agglomerative clusterings of a numeric table.
 * `header` names the columns; `rows` holds numbers, except that the column
 * named by `opts.truth` (if any) may hold string class labels.
 */
export function cluster(
  header: ReadonlyArray<string>,
  rows: ReadonlyArray<ReadonlyArray<string | number>>,
  opts: ClusterOptions = {},
): RelabReport<Record<string, unknown>> {
  const csv =
    [header.join(","), ...rows.map((r) => r.map(String).join(","))].join("\n") +
    "\n";
  const args = ["cluster"];
  if (opts.algos) args.push("--algo", ...opts.algos);
  if (opts.metric) args.push("--metric", opts.metric);
  if (opts.truth) args.push("--truth", opts.truth);
  if (opts.criterion) args.push("--criterion", opts.criterion);
  if (opts.k !== undefined) args.push("--k", String(opts.k));
  return withTempFile("data.csv", csv, (path) =>
    runCli<Record<string, unknown>>([
      args[0]!,
      path,
      ...args.slice(1),
      ...commonArgs(opts),
    ]),
  );
}

export interface LdtOptions extends CommonOptions {
  betas: ReadonlyArray<number>;
  a: number;
  m?: number;
  nPrime?: number;
  sweeps: number;
  burnin: number;
  thin?: number;
}

/** Tilted-ensemble MCMC sweep over the bias parameter beta. */
export function ldtSweep(
  labels: ReadonlyArray<string | number>,
  opts: LdtOptions,
): RelabReport<Record<string, unknown>> {
  const args = [
    "ldt",
    "--betas",
    ...opts.betas.map(String),
    "--a",
    String(opts.a),
    "--sweeps",
    String(opts.sweeps),
    "--burnin",
    String(opts.burnin),
  ];
  if (opts.m !== undefined) args.push("--m", String(opts.m));
  if (opts.nPrime !== undefined) args.push("--n-prime", String(opts.nPrime));
  if (opts.thin !== undefined) args.push("--thin", String(opts.thin));
  return withTempFile("labels.txt", labelsContent(labels), (path) =>
    runCli<Record<string, unknown>>([
      args[0]!,
      path,
      ...args.slice(1),
      ...commonArgs(opts),
    ]),
  );
}

export interface OlmOptions extends CommonOptions {
  pow2?: number;
  classes?: ReadonlyArray<number>;
  mu?: number;
  muGrid?: ReadonlyArray<number>;
  ratioGrid?: ReadonlyArray<number>;
}

/** Entropy-energy curves of the solvable learning machine. */
export function olm(
  opts: OlmOptions,
): RelabReport<Record<string, unknown>> {
  const args = ["olm"];
  if (opts.pow2 !== undefined) args.push("--pow2", String(opts.pow2));
  if (opts.classes) args.push("--classes", ...opts.classes.map(String));
  if (opts.mu !== undefined) args.push("--mu", String(opts.mu));
  if (opts.muGrid) args.push("--mu-grid", ...opts.muGrid.map(String));
  if (opts.ratioGrid) args.push("--ratio-grid", ...opts.ratioGrid.map(String));
  return runCli<Record<string, unknown>>([...args, ...commonArgs(opts)]);
}

export interface RemOptions extends CommonOptions {
  ns: number;
  nt?: number;
  gammaS?: number;
  gammaT?: number;
  ds?: number;
  dt?: number;
  mode?: "empirical" | "evt";
  replicas?: number;
  phase?: boolean;
  ratioGrid?: ReadonlyArray<number>;
  nuGrid?: ReadonlyArray<number>;
}

/** Phase behaviour of the random-energy model. */
export function rem(
  opts: RemOptions,
): RelabReport<Record<string, unknown>> {
  const args = ["rem", "--ns", String(opts.ns)];
  if (opts.nt !== undefined) args.push("--nt", String(opts.nt));
  if (opts.gammaS !== undefined) args.push("--gamma-s", String(opts.gammaS));
  if (opts.gammaT !== undefined) args.push("--gamma-t", String(opts.gammaT));
  if (opts.ds !== undefined) args.push("--ds", String(opts.ds));
  if (opts.dt !== undefined) args.push("--dt", String(opts.dt));
  if (opts.mode) args.push("--mode", opts.mode);
  if (opts.replicas !== undefined) args.push("--replicas", String(opts.replicas));
  if (opts.phase) args.push("--phase");
  if (opts.ratioGrid) args.push("--ratio-grid", ...opts.ratioGrid.map(String));
  if (opts.nuGrid) args.push("--nu-grid", ...opts.nuGrid.map(String));
  return runCli<Record<string, unknown>>([...args, ...commonArgs(opts)]);
}

export interface BoundResult {
  n: number;
  relevance: number;
  raw: number;
  r_max: number;
  note: string;
}

/** Maximal parameter count resolvable from n samples at the given relevance (nats). */
export function paramBound(
  n: number,
  relevance: number,
  opts: CommonOptions = {},
): RelabReport<BoundResult> {
  return runCli<BoundResult>([
    "bound",
    "--n",
    String(n),
    "--hk",
    String(relevance),
    ...commonArgs(opts),
  ]);
}

export interface EvidenceOptions extends CommonOptions {
  r: number;
  n: number;
  logdet: number;
  logprior: number;
  loglik: number;
}

/** Laplace / BMS evidence approximations and posterior-prior KL. */
export function evidence(
  opts: EvidenceOptions,
): RelabReport<Record<string, unknown>> {
  return runCli<Record<string, unknown>>([
    "evidence",
    "--r",
    String(opts.r),
    "--n",
    String(opts.n),
    "--logdet",
    String(opts.logdet),
    "--logprior",
    String(opts.logprior),
    "--loglik",
    String(opts.loglik),
    ...commonArgs(opts),
  ]);
}

/** Reader for the experiment-harness CSV schema. */

export const REQUIRED_COLUMNS = [
  "experiment",
  "n",
  "stat_name",
  "estimate",
  "stderr",
  "n_replicas",
  "seed",
] as const;

export interface StatRow {
  experiment: string;
  n: number;
  statName: string;
  estimate: number;
  stderr: number | null;
  nReplicas: number;
  seed: number;
}

export class SchemaError extends Error {
  readonly missing: string[];

  constructor(missing: string[]) {
    super(`CSV schema mismatch; missing columns: ${missing.join(", ")}`);
    this.missing = missing;
  }
}

/** Parse harness CSV text; the header must carry every schema column. */
export function parseCsv(text: string): StatRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError([...REQUIRED_COLUMNS]);
  }
  const header = lines[0].split(",");
  const index = new Map(header.map((h, i) => [h.trim(), i]));
  const missing = REQUIRED_COLUMNS.filter((c) => !index.has(c));
  if (missing.length > 0) {
    throw new SchemaError(missing);
  }
  const col = (c: string) => index.get(c) as number;
  const rows: StatRow[] = [];
  for (const line of lines.slice(1)) {
    if (line.startsWith("experiment,")) continue; // concatenated exports
    const parts = line.split(",");
    const stderrRaw = parts[col("stderr")];
    const stderr = Number(stderrRaw);
    rows.push({
      experiment: parts[col("experiment")],
      n: Number(parts[col("n")]),
      statName: parts[col("stat_name")],
      estimate: Number(parts[col("estimate")]),
      stderr: Number.isFinite(stderr) ? stderr : null,
      nReplicas: Number(parts[col("n_replicas")]),
      seed: Number(parts[col("seed")]),
    });
  }
  return rows;
}

export function filterRows(
  rows: StatRow[],
  experiment: string | undefined,
  predicate: (statName: string) => boolean,
): StatRow[] {
  return rows.filter(
    (r) => (experiment === undefined || r.experiment === experiment) && predicate(r.statName),
  );
}

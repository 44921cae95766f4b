/** Figure specifications, read from TOML (or mirrored JSON). */

import { readFileSync } from "fs";
import { parse as parseToml } from "smol-toml";

export const FIGURE_KINDS = ["ecdf_overlay", "trend", "ratios", "dominance"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureSpec {
  input: string;
  kind: FigureKind;
  output: string;
  title?: string;
  xlabel?: string;
  ylabel?: string;
  /** restrict to one experiment id (defaults per kind) */
  experiment?: string;
  /** stat name (trend) or prefix (ratios) selector */
  stat?: string;
}

export class SpecError extends Error {}

function coerce(data: Record<string, unknown>): FigureSpec {
  const bad: string[] = [];
  for (const key of ["input", "kind", "output"]) {
    if (typeof data[key] !== "string") bad.push(key);
  }
  if (bad.length > 0) {
    throw new SpecError(`figure spec needs string fields: ${bad.join(", ")}`);
  }
  const kind = data.kind as string;
  if (!FIGURE_KINDS.includes(kind as FigureKind)) {
    throw new SpecError(
      `unknown figure kind '${kind}'; expected one of ${FIGURE_KINDS.join(", ")}`,
    );
  }
  const opt = (k: string) => (typeof data[k] === "string" ? (data[k] as string) : undefined);
  return {
    input: data.input as string,
    kind: kind as FigureKind,
    output: data.output as string,
    title: opt("title"),
    xlabel: opt("xlabel"),
    ylabel: opt("ylabel"),
    experiment: opt("experiment"),
    stat: opt("stat"),
  };
}

export function parseSpecText(text: string, format: "toml" | "json"): FigureSpec {
  const data =
    format === "json" ? (JSON.parse(text) as Record<string, unknown>) : parseToml(text);
  return coerce(data as Record<string, unknown>);
}

export function loadSpec(path: string): FigureSpec {
  const format = path.endsWith(".json") ? "json" : "toml";
  return parseSpecText(readFileSync(path, "utf8"), format);
}

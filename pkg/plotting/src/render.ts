/** The four figure kinds, each a pure function of the CSV rows. */

import { readFileSync, writeFileSync } from "fs";

import { filterRows, parseCsv, StatRow } from "./csv";
import { FigureSpec, SpecError } from "./spec";
import { HEIGHT, linearScale, logScale, MARGIN, PALETTE, Svg, ticks, WIDTH } from "./svg";

const PLOT_X0 = MARGIN.left;
const PLOT_X1 = WIDTH - MARGIN.right;
const PLOT_Y0 = HEIGHT - MARGIN.bottom;
const PLOT_Y1 = MARGIN.top;

class DataError extends Error {}

function need(rows: StatRow[], what: string): StatRow[] {
  if (rows.length === 0) {
    throw new DataError(`no rows matched ${what}`);
  }
  return rows;
}

/** "ecdf_<series>:<level>" rows -> one quantile curve per (series, n). */
function renderEcdfOverlay(rows: StatRow[], spec: FigureSpec): string {
  const sel = need(
    filterRows(rows, spec.experiment, (s) => s.startsWith("ecdf_")),
    "stat prefix 'ecdf_'",
  );
  const maxN = Math.max(...sel.map((r) => r.n));
  const series = new Map<string, Array<[number, number]>>();
  for (const r of sel) {
    if (r.n !== maxN && r.n !== 0) continue; // largest window plus n-free rows
    const m = r.statName.match(/^ecdf_([^:]+):(.+)$/);
    if (!m) continue;
    const level = Number(m[2]);
    const pts = series.get(m[1]) ?? [];
    pts.push([r.estimate, level]);
    series.set(m[1], pts);
  }
  if (series.size === 0) {
    throw new DataError("no parsable ecdf_<series>:<level> rows");
  }
  const allX = [...series.values()].flat().map(([x]) => x);
  const xs = linearScale(Math.min(...allX), Math.max(...allX), PLOT_X0, PLOT_X1);
  const ys = linearScale(0, 1, PLOT_Y0, PLOT_Y1);
  const svg = new Svg(spec.title ?? `quantile overlay (n=${maxN})`);
  svg.axes(xs, ys, spec.xlabel ?? "value", spec.ylabel ?? "probability",
           ticks(xs.domain[0], xs.domain[1]), ticks(0, 1));
  const names = [...series.keys()].sort();
  names.forEach((name, i) => {
    const pts = series.get(name)!;
    pts.sort((a, b) => a[1] - b[1]);
    svg.polyline(pts.map(([x, p]) => [xs(x), ys(p)]), PALETTE[i % PALETTE.length],
                 1.8, i % 2 === 1 ? "5,3" : undefined);
    svg.text(PLOT_X1 - 6, PLOT_Y1 + 16 + 14 * i, name,
             { anchor: "end", size: 11 });
    svg.rect(PLOT_X1 - 80, PLOT_Y1 + 10 + 14 * i, 14, 3, PALETTE[i % PALETTE.length]);
  });
  return svg.render();
}

/** statistic vs window size on a log axis, with error bars when present. */
function renderTrend(rows: StatRow[], spec: FigureSpec): string {
  const stat = spec.stat ?? "ks";
  const sel = need(
    filterRows(rows, spec.experiment,
               (s) => s === stat || (s.startsWith(stat) && !s.includes(":"))),
    `stat '${stat}'`,
  ).filter((r) => r.n > 0);
  need(sel, `stat '${stat}' with positive n`);
  sel.sort((a, b) => a.n - b.n);
  const xs = logScale(sel[0].n, sel[sel.length - 1].n, PLOT_X0, PLOT_X1);
  const vals = sel.map((r) => r.estimate);
  const lo = Math.min(...vals, 0);
  const hi = Math.max(...vals) * 1.15;
  const ys = linearScale(lo, hi, PLOT_Y0, PLOT_Y1);
  const svg = new Svg(spec.title ?? `${stat} by window size`);
  const xticks = sel.map((r) => r.n);
  svg.axes(xs, ys, spec.xlabel ?? "window size n (log)", spec.ylabel ?? stat,
           xticks, ticks(lo, hi));
  svg.polyline(sel.map((r) => [xs(r.n), ys(r.estimate)]), PALETTE[0], 2);
  for (const r of sel) {
    svg.circle(xs(r.n), ys(r.estimate), 3.2, PALETTE[0]);
    if (r.stderr !== null && r.stderr > 0) {
      svg.line(xs(r.n), ys(r.estimate - r.stderr), xs(r.n), ys(r.estimate + r.stderr),
               PALETTE[0], 1);
    }
  }
  return svg.render();
}

/** quartile rows "<name>:q25|q50|q75" -> grouped boxes per window size. */
function renderRatios(rows: StatRow[], spec: FigureSpec): string {
  const sel = need(
    filterRows(rows, spec.experiment ?? "big-jump", (s) => /:q(25|50|75)$/.test(s)),
    "quartile stats '<name>:q25/q50/q75'",
  );
  const groups = new Map<string, { q25?: number; q50?: number; q75?: number }>();
  for (const r of sel) {
    const m = r.statName.match(/^(.*):q(25|50|75)$/)!;
    const key = `${m[1]} @ n=${r.n}`;
    const g = groups.get(key) ?? {};
    (g as Record<string, number>)[`q${m[2]}`] = r.estimate;
    groups.set(key, g);
  }
  const keys = [...groups.keys()].sort();
  const allVals = [...groups.values()].flatMap((g) => [g.q25 ?? 0, g.q75 ?? 0]);
  const hi = Math.max(...allVals) * 1.25;
  const ys = linearScale(0, hi, PLOT_Y0, PLOT_Y1);
  const svg = new Svg(spec.title ?? "magnitude ratio quartiles");
  const slot = (PLOT_X1 - PLOT_X0) / keys.length;
  svg.axes(linearScale(0, 1, PLOT_X0, PLOT_X1), ys, spec.xlabel ?? "",
           spec.ylabel ?? "ratio", [], ticks(0, hi));
  keys.forEach((key, i) => {
    const g = groups.get(key)!;
    const cx = PLOT_X0 + slot * (i + 0.5);
    const w = Math.min(46, slot * 0.5);
    const color = PALETTE[i % PALETTE.length];
    if (g.q25 !== undefined && g.q75 !== undefined) {
      svg.rect(cx - w / 2, ys(g.q75), w, ys(g.q25) - ys(g.q75), `${color}33`, color);
    }
    if (g.q50 !== undefined) {
      svg.line(cx - w / 2, ys(g.q50), cx + w / 2, ys(g.q50), color, 2);
    }
    svg.text(cx, PLOT_Y0 + 17, key, { anchor: "middle", size: 9 });
  });
  return svg.render();
}

/** joint-CDF bars of the limit process against the time-changed benchmark. */
function renderDominance(rows: StatRow[], spec: FigureSpec): string {
  const exp = spec.experiment ?? "dominance";
  const lhs = filterRows(rows, exp, (s) => s === "joint_cdf_limit");
  const rhs = filterRows(rows, exp, (s) => s === "joint_cdf_gumbel_timechange");
  const margin = filterRows(rows, exp, (s) => s === "dominance_margin_se");
  if (lhs.length === 0 || rhs.length === 0) {
    throw new DataError(
      "dominance needs stats 'joint_cdf_limit' and 'joint_cdf_gumbel_timechange'",
    );
  }
  const bars: Array<[string, number, string]> = [
    ["limit process", lhs[0].estimate, PALETTE[0]],
    ["time-changed Gumbel", rhs[0].estimate, PALETTE[1]],
  ];
  const hi = Math.max(...bars.map(([, v]) => v)) * 1.3;
  const ys = linearScale(0, hi, PLOT_Y0, PLOT_Y1);
  const svg = new Svg(spec.title ?? "joint CDF dominance");
  svg.axes(linearScale(0, 1, PLOT_X0, PLOT_X1), ys, spec.xlabel ?? "",
           spec.ylabel ?? "joint CDF", [], ticks(0, hi));
  const slot = (PLOT_X1 - PLOT_X0) / bars.length;
  bars.forEach(([label, value, color], i) => {
    const cx = PLOT_X0 + slot * (i + 0.5);
    svg.rect(cx - 40, ys(value), 80, PLOT_Y0 - ys(value), color);
    svg.text(cx, ys(value) - 6, value.toPrecision(4), { anchor: "middle" });
    svg.text(cx, PLOT_Y0 + 17, label, { anchor: "middle" });
  });
  if (margin.length > 0) {
    svg.text(PLOT_X1 - 4, PLOT_Y1 + 14, `margin: ${margin[0].estimate.toPrecision(4)} SE`,
             { anchor: "end", size: 11 });
  }
  return svg.render();
}

export function renderToString(spec: FigureSpec, csvText: string): string {
  const rows = parseCsv(csvText);
  switch (spec.kind) {
    case "ecdf_overlay":
      return renderEcdfOverlay(rows, spec);
    case "trend":
      return renderTrend(rows, spec);
    case "ratios":
      return renderRatios(rows, spec);
    case "dominance":
      return renderDominance(rows, spec);
    default:
      throw new SpecError(`unhandled kind ${(spec as FigureSpec).kind}`);
  }
}

/** Render the figure and write it; output depends only on the inputs. */
export function render(spec: FigureSpec): string {
  const csvText = readFileSync(spec.input, "utf8");
  const svg = renderToString(spec, csvText);
  writeFileSync(spec.output, svg);
  return spec.output;
}

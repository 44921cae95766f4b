/** Minimal deterministic SVG builder: fixed canvas, no timestamps. */

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { top: 40, right: 24, bottom: 48, left: 64 };

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return "0";
  if (x === 0) return "0";
  const s = x.toPrecision(6);
  return s.includes(".") ? s.replace(/\.?0+$/, "").replace(/\.?0+e/, "e") : s;
}

export interface Scale {
  (v: number): number;
  domain: [number, number];
}

export function linearScale(lo: number, hi: number, a: number, b: number): Scale {
  const span = hi - lo || 1;
  const f = ((v: number) => a + ((v - lo) / span) * (b - a)) as Scale;
  f.domain = [lo, hi];
  return f;
}

export function logScale(lo: number, hi: number, a: number, b: number): Scale {
  const l0 = Math.log10(lo);
  const span = Math.log10(hi) - l0 || 1;
  const f = ((v: number) => a + ((Math.log10(v) - l0) / span) * (b - a)) as Scale;
  f.domain = [lo, hi];
  return f;
}

export function ticks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo || 1;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (span / count) / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const start = Math.ceil(lo / s) * s;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-12; v += s) out.push(Number(v.toPrecision(12)));
  return out;
}

export class Svg {
  private parts: string[] = [];

  constructor(title?: string) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
        `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
    );
    this.parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
    if (title) {
      this.text(WIDTH / 2, 22, title, { anchor: "middle", size: 15, weight: "bold" });
    }
  }

  raw(s: string): void {
    this.parts.push(s);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke = "#333", width = 1): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  polyline(pts: Array<[number, number]>, stroke: string, width = 1.5, dash?: string): void {
    const d = pts.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<polyline points="${d}" fill="none" stroke="${stroke}" stroke-width="${width}"${dashAttr}/>`,
    );
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${fill}"/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string, stroke = "none"): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ` +
        `fill="${fill}" stroke="${stroke}"/>`,
    );
  }

  text(
    x: number,
    y: number,
    content: string,
    opts: { anchor?: string; size?: number; weight?: string; rotate?: boolean } = {},
  ): void {
    const anchor = opts.anchor ?? "start";
    const size = opts.size ?? 11;
    const weight = opts.weight ? ` font-weight="${opts.weight}"` : "";
    const transform = opts.rotate ? ` transform="rotate(-90 ${fmt(x)} ${fmt(y)})"` : "";
    const esc = content.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" ` +
        `font-size="${size}"${weight}${transform}>${esc}</text>`,
    );
  }

  axes(xs: Scale, ys: Scale, xlabel: string, ylabel: string, xticks: number[], yticks: number[]): void {
    const x0 = MARGIN.left;
    const x1 = WIDTH - MARGIN.right;
    const y0 = HEIGHT - MARGIN.bottom;
    const y1 = MARGIN.top;
    this.line(x0, y0, x1, y0);
    this.line(x0, y0, x0, y1);
    for (const t of xticks) {
      const px = xs(t);
      this.line(px, y0, px, y0 + 4);
      this.text(px, y0 + 17, fmt(t), { anchor: "middle" });
    }
    for (const t of yticks) {
      const py = ys(t);
      this.line(x0 - 4, py, x0, py);
      this.text(x0 - 7, py + 3.5, fmt(t), { anchor: "end" });
    }
    this.text((x0 + x1) / 2, HEIGHT - 12, xlabel, { anchor: "middle", size: 12 });
    this.text(16, (y0 + y1) / 2, ylabel, { anchor: "middle", size: 12, rotate: true });
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

import { mkdirSync, readFileSync } from "fs";
import { join } from "path";
import { beforeAll, describe, expect, it } from "vitest";

import { parseCsv, SchemaError } from "../src/csv";
import { render, renderToString } from "../src/render";
import { loadSpec, parseSpecText } from "../src/spec";

const ROOT = join(__dirname, "..");
const CSV_PATH = join(ROOT, "fixtures", "example.csv");
const SPECS = ["fig_ecdf.toml", "fig_trend.toml", "fig_ratios.toml", "fig_dominance.toml"];

beforeAll(() => {
  mkdirSync(join(ROOT, "out"), { recursive: true });
});

describe("csv parsing", () => {
  it("reads every row of the shipped example", () => {
    const rows = parseCsv(readFileSync(CSV_PATH, "utf8"));
    expect(rows.length).toBe(162);
    const experiments = new Set(rows.map((r) => r.experiment));
    expect(experiments).toEqual(new Set(["qlaw", "main-trend", "big-jump", "dominance"]));
  });

  it("maps the nan stderr sentinel to null", () => {
    const rows = parseCsv(readFileSync(CSV_PATH, "utf8"));
    expect(rows.some((r) => r.stderr === null)).toBe(true);
    expect(rows.some((r) => r.stderr !== null && r.stderr > 0)).toBe(true);
  });

  it("names missing columns", () => {
    const broken = "experiment,n,stat_name,estimate\nqlaw,1,x,0.5\n";
    try {
      parseCsv(broken);
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(SchemaError);
      expect((err as SchemaError).missing).toEqual(["stderr", "n_replicas", "seed"]);
    }
  });
});

describe("figure specs", () => {
  it("parses TOML and mirrored JSON identically", () => {
    const toml = 'input = "a.csv"\nkind = "trend"\noutput = "b.svg"\nstat = "ks"\n';
    const json = JSON.stringify({ input: "a.csv", kind: "trend", output: "b.svg", stat: "ks" });
    expect(parseSpecText(toml, "toml")).toEqual(parseSpecText(json, "json"));
  });

  it("rejects unknown kinds", () => {
    expect(() =>
      parseSpecText('input="a"\nkind="pie"\noutput="b"\n', "toml"),
    ).toThrow(/unknown figure kind/);
  });

  it("lists missing fields", () => {
    expect(() => parseSpecText('kind="trend"\n', "toml")).toThrow(/input, output/);
  });
});

describe("rendering", () => {
  for (const name of SPECS) {
    it(`renders ${name} deterministically`, () => {
      const spec = loadSpec(join(ROOT, "fixtures", name));
      spec.input = CSV_PATH;
      spec.output = join(ROOT, "out", name.replace(".toml", ".svg"));
      const path = render(spec);
      const first = readFileSync(path, "utf8");
      expect(first.startsWith("<svg")).toBe(true);
      expect(first).toContain("</svg>");
      expect(first).not.toMatch(/\d{4}-\d{2}-\d{2}/); // no dates anywhere
      const again = readFileSync(render(spec), "utf8");
      expect(again).toBe(first); // byte-identical rerun
    });
  }

  it("draws one curve per ecdf series", () => {
    const spec = loadSpec(join(ROOT, "fixtures", "fig_ecdf.toml"));
    spec.input = CSV_PATH;
    const svg = renderToString(spec, readFileSync(CSV_PATH, "utf8"));
    expect(svg.match(/<polyline/g)?.length).toBe(2); // empirical + limit
  });

  it("passes monotone trend data through in order", () => {
    const csv = [
      "experiment,n,stat_name,estimate,stderr,n_replicas,seed",
      "t,100,ks,0.5,nan,10,1",
      "t,1000,ks,0.3,nan,10,1",
      "t,10000,ks,0.2,nan,10,1",
    ].join("\n");
    const svg = renderToString(
      { input: "-", kind: "trend", output: "-", experiment: "t", stat: "ks" },
      csv,
    );
    const pts = svg.match(/<polyline points="([^"]+)"/)![1]
      .split(" ")
      .map((p) => p.split(",").map(Number));
    expect(pts.length).toBe(3);
    const ys = pts.map(([, y]) => y);
    expect(ys[0]).toBeLessThan(ys[1]); // larger KS sits higher (smaller y is higher)
    expect(ys[1]).toBeLessThan(ys[2]);
  });

  it("names the missing stats for an empty dominance selection", () => {
    const csv = "experiment,n,stat_name,estimate,stderr,n_replicas,seed\nx,1,a,1,nan,1,1\n";
    expect(() =>
      renderToString({ input: "-", kind: "dominance", output: "-" }, csv),
    ).toThrow(/joint_cdf_limit/);
  });
});

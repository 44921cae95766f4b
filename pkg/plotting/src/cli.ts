#!/usr/bin/env node
/** lrdx-plot --spec fig.toml
 *
 * Exit codes: 0 rendered, 1 usage/spec/data errors.
 */

import { render } from "./render";
import { loadSpec } from "./spec";

export function main(argv: string[]): number {
  const args = [...argv];
  const idx = args.indexOf("--spec");
  if (idx === -1 || idx + 1 >= args.length) {
    process.stderr.write("usage: lrdx-plot --spec <figure.toml|figure.json>\n");
    return 1;
  }
  try {
    const out = render(loadSpec(args[idx + 1]));
    process.stdout.write(`wrote ${out}\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`lrdx-plot: ${(err as Error).message}\n`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}

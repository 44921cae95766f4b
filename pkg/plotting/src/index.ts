export { parseCsv, filterRows, SchemaError, REQUIRED_COLUMNS } from "./csv";
export type { StatRow } from "./csv";
export { loadSpec, parseSpecText, SpecError, FIGURE_KINDS } from "./spec";
export type { FigureSpec, FigureKind } from "./spec";
export { render, renderToString } from "./render";

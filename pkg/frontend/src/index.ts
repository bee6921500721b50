export { parseCsv, requireColumns, SchemaError } from "./csv.js";
export { FIGURE_KINDS, renderFigure } from "./figures.js";
export type { FigureKind, FigureSpec } from "./figures.js";
export { sceneToSvg } from "./svg.js";
export { sceneToPng } from "./png.js";
export { main } from "./cli.js";

/** String-assembly SVG primitives; all coordinates already in pixels. */

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function fmt(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toFixed(1);
}

export interface Margins {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export const WIDTH = 720;
export const HEIGHT = 420;
export const MARGINS: Margins = { left: 64, right: 24, top: 40, bottom: 52 };

export function open(width = WIDTH, height = HEIGHT): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `font-family="Helvetica, Arial, sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="#fff"/>\n`
  );
}

export function close(): string {
  return "</svg>\n";
}

export function polyline(points: string, stroke: string, width = 1.4, dash?: string): string {
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
  return `<polyline points="${points}" fill="none" stroke="${stroke}" stroke-width="${width}"${dashAttr}/>\n`;
}

export function circle(x: number, y: number, r: number, fill: string): string {
  return `<circle cx="${x.toFixed(1)}" cy="${y.toFixed(1)}" r="${r}" fill="${fill}"/>\n`;
}

export function rect(x: number, y: number, w: number, h: number, fill: string): string {
  return `<rect x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${w.toFixed(2)}" height="${h.toFixed(2)}" fill="${fill}"/>\n`;
}

export function text(
  x: number,
  y: number,
  content: string,
  size: number,
  opts: { anchor?: string; fill?: string; weight?: string; rotate?: number } = {},
): string {
  const anchor = opts.anchor ? ` text-anchor="${opts.anchor}"` : "";
  const weight = opts.weight ? ` font-weight="${opts.weight}"` : "";
  const rotate = opts.rotate ? ` transform="rotate(${opts.rotate} ${x} ${y})"` : "";
  const fill = opts.fill ?? "#222";
  return (
    `<text x="${x.toFixed(1)}" y="${y.toFixed(1)}" font-size="${size}" fill="${fill}"` +
    `${anchor}${weight}${rotate}>${esc(content)}</text>\n`
  );
}

export function line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash?: string): string {
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
  return (
    `<line x1="${x1.toFixed(1)}" y1="${y1.toFixed(1)}" x2="${x2.toFixed(1)}" y2="${y2.toFixed(1)}" ` +
    `stroke="${stroke}" stroke-width="${width}"${dashAttr}/>\n`
  );
}

/**
 * Sequential blue ramp for values in [lo, hi] (hi <= 0 in practice:
 * deeper localized-mode frequency renders darker).
 */
export function blueRamp(v: number, lo: number, hi: number): string {
  const t = hi === lo ? 0.5 : (v - lo) / (hi - lo);
  const clamped = Math.min(1, Math.max(0, t));
  const ch = (a: number, b: number) => Math.round(a + (b - a) * clamped);
  return `rgb(${ch(8, 198)},${ch(48, 219)},${ch(107, 239)})`;
}

export const NAN_FILL = "#e8e4de";

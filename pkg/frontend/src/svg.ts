/** Scene -> SVG string.  Coordinates rounded to 0.01 px for stable output. */

import type { Item, Scene } from "./scene.js";

function px(v: number): string {
  return (Math.round(v * 100) / 100).toString();
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function itemSvg(item: Item): string {
  switch (item.kind) {
    case "rect":
      return `<rect x="${px(item.x)}" y="${px(item.y)}" width="${px(item.w)}" height="${px(item.h)}" fill="${item.fill}"/>`;
    case "line":
      return `<line x1="${px(item.x1)}" y1="${px(item.y1)}" x2="${px(item.x2)}" y2="${px(item.y2)}" stroke="${item.stroke}" stroke-width="${px(item.width)}"/>`;
    case "polyline": {
      const pts = item.points.map(([x, y]) => `${px(x)},${px(y)}`).join(" ");
      return `<polyline points="${pts}" fill="none" stroke="${item.stroke}" stroke-width="${px(item.width)}"/>`;
    }
    case "circle":
      return `<circle cx="${px(item.cx)}" cy="${px(item.cy)}" r="${px(item.r)}" fill="${item.fill}"/>`;
    case "text":
      return `<text x="${px(item.x)}" y="${px(item.y)}" font-size="${px(item.size)}" font-family="sans-serif" text-anchor="${item.anchor}" fill="#222222">${esc(item.text)}</text>`;
  }
}

export function sceneToSvg(scene: Scene): string {
  const body = scene.items.map(itemSvg).join("\n  ");
  return `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${scene.width} ${scene.height}" width="${scene.width}" height="${scene.height}">\n  ${body}\n</svg>\n`;
}

// Session-local throughput history as a tiny inline SVG. Nothing here is
// persisted or sent anywhere; it only replays numbers the service returned.

export function renderSparkline(history: number[], width = 160, height = 32): SVGSVGElement {
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  svg.setAttribute("class", "sparkline");

  if (history.length >= 2) {
    const max = Math.max(...history);
    const min = Math.min(...history);
    const span = max - min || 1;
    const step = width / (history.length - 1);
    const points = history
      .map((value, i) => {
        const x = i * step;
        const y = height - ((value - min) / span) * (height - 4) - 2;
        return `${x.toFixed(1)},${y.toFixed(1)}`;
      })
      .join(" ");
    const line = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
    line.setAttribute("points", points);
    line.setAttribute("fill", "none");
    line.setAttribute("stroke", "currentColor");
    svg.appendChild(line);
  }
  return svg;
}

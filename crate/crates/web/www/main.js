import init, { eval_sequence, check_statement, product_grid } from "./pkg/dualcong_web.js";

const $ = (id) => document.getElementById(id);
const pretty = (text) => JSON.stringify(JSON.parse(text), null, 2);

function drawGrid() {
  const p = Number($("gr-p").value);
  const out = JSON.parse(product_grid($("gr-id").value, p, $("gr-y1").value, $("gr-y2").value));
  if (out.error) {
    $("gr-out").textContent = out.error;
    return;
  }
  const canvas = $("gr-canvas");
  const ctx = canvas.getContext("2d");
  const cell = Math.max(1, Math.floor(canvas.width / p));
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  let differ = 0;
  for (let i = 0; i < p; i++) {
    for (let j = 0; j < p; j++) {
      const k = i * p + j;
      if (out.lhs[k] !== out.rhs[k]) {
        differ++;
        ctx.fillStyle = "#d22";
      } else {
        const shade = Math.round(255 * (1 - out.lhs[k] / (p - 1)));
        ctx.fillStyle = `rgb(${shade},${shade},${shade})`;
      }
      ctx.fillRect(j * cell, i * cell, cell, cell);
    }
  }
  $("gr-out").textContent = `${p * p} pairs, ${differ} differing`;
}

await init();

$("ev-go").onclick = () => {
  $("ev-out").textContent = pretty(eval_sequence(
    $("ev-kind").value, Number($("ev-n").value),
    $("ev-x").value, $("ev-y").value, $("ev-a").value, $("ev-mod").value));
};
$("ck-go").onclick = () => {
  $("ck-out").textContent = pretty(check_statement(
    $("ck-id").value, Number($("ck-p").value), $("ck-params").value));
};
$("gr-go").onclick = drawGrid;

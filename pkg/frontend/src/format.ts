/**
 * Number formatting that reproduces the evaluation service's JSON
 * encoding byte for byte.
 *
 * Python's repr and JavaScript's String() both emit the shortest
 * decimal that round-trips the double, but they switch to exponent
 * notation at different magnitudes and style the exponent differently.
 * This formatter re-applies Python's rules to the JS digits.
 */

export function pyFloatRepr(x: number): string {
  if (!Number.isFinite(x)) {
    if (Number.isNaN(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
  }
  if (x === 0) return Object.is(x, -0) ? "-0.0" : "0.0";

  const neg = x < 0;
  const abs = Math.abs(x);
  // shortest significant digits via toExponential without an argument
  const [mantissa, expStr] = abs.toExponential().split("e");
  const exp = parseInt(expStr, 10);
  const digits = mantissa.replace(".", "");

  let body: string;
  if (exp < -4 || exp >= 16) {
    // python style: d.ddde[+-]XX with at least two exponent digits
    const m = digits.length > 1 ? `${digits[0]}.${digits.slice(1)}` : digits[0];
    const sign = exp < 0 ? "-" : "+";
    const pad = String(Math.abs(exp)).padStart(2, "0");
    body = `${m}e${sign}${pad}`;
  } else if (exp >= digits.length - 1) {
    // integral value: pad zeros and add the trailing .0
    body = digits + "0".repeat(exp - digits.length + 1) + ".0";
  } else if (exp >= 0) {
    body = `${digits.slice(0, exp + 1)}.${digits.slice(exp + 1)}`;
  } else {
    body = `0.${"0".repeat(-exp - 1)}${digits}`;
  }
  return neg ? `-${body}` : body;
}

/** Linear gain to dB, displayed to two decimals (presentation only). */
export function dbString(linear: number): string {
  if (linear <= 0) return "-inf dB";
  return `${(10 * Math.log10(linear)).toFixed(2)} dB`;
}

export function metersString(x: number): string {
  return `${x.toFixed(2)} m`;
}

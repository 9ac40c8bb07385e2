import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { dbString, pyFloatRepr } from "../src/format.js";

const goldens: [number, string][] = JSON.parse(
  readFileSync(new URL("../fixtures/float_goldens.json", import.meta.url), "utf-8"),
);

describe("pyFloatRepr", () => {
  it("matches the service's float encoding on the golden set", () => {
    for (const [value, expected] of goldens) {
      expect(pyFloatRepr(value), `value ${value}`).toBe(expected);
    }
  });

  it("styles integral floats and zeros like the service", () => {
    expect(pyFloatRepr(3)).toBe("3.0");
    expect(pyFloatRepr(0)).toBe("0.0");
    expect(pyFloatRepr(-0)).toBe("-0.0");
    expect(pyFloatRepr(-42)).toBe("-42.0");
  });

  it("switches to exponent notation at the service's thresholds", () => {
    expect(pyFloatRepr(1e-4)).toBe("0.0001");
    expect(pyFloatRepr(1e-5)).toBe("1e-05");
    expect(pyFloatRepr(9.9e15)).toBe("9900000000000000.0");
    expect(pyFloatRepr(1e16)).toBe("1e+16");
  });

  it("round-trips: parsing the string recovers the exact double", () => {
    for (const [value] of goldens) {
      expect(Number(pyFloatRepr(value))).toBe(value);
    }
  });
});

describe("dbString", () => {
  it("formats gains in decibels", () => {
    expect(dbString(1)).toBe("0.00 dB");
    expect(dbString(10)).toBe("10.00 dB");
    expect(dbString(0)).toBe("-inf dB");
  });
});

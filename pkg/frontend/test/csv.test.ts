import { describe, expect, it } from "vitest";

import { num, parseCsv, requireColumns, SchemaError } from "../src/csv.js";

describe("parseCsv", () => {
  it("reads header and rows", () => {
    const t = parseCsv("a,b\n1,2\n3,\n");
    expect(t.header).toEqual(["a", "b"]);
    expect(t.rows).toHaveLength(2);
    expect(num(t.rows[1], 1)).toBeNaN();
  });

  it("rejects empty text", () => {
    expect(() => parseCsv("")).toThrow(SchemaError);
  });

  it("rejects header-only files", () => {
    expect(() => parseCsv("a,b\n")).toThrow(/no data rows/);
  });

  it("rejects ragged rows", () => {
    expect(() => parseCsv("a,b\n1,2,3\n")).toThrow(/ragged/);
  });
});

describe("requireColumns", () => {
  it("names the missing column", () => {
    const t = parseCsv("a,b\n1,2\n");
    try {
      requireColumns(t, ["a", "log_norm_numeric"]);
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(SchemaError);
      expect((err as SchemaError).column).toBe("log_norm_numeric");
      expect((err as Error).message).toContain("log_norm_numeric");
    }
  });

  it("maps names to indices", () => {
    const t = parseCsv("x,y,z\n1,2,3\n");
    expect(requireColumns(t, ["z", "x"])).toEqual({ z: 2, x: 0 });
  });
});

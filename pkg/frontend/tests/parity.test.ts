import { describe, expect, it } from "vitest";
import {
  analyze,
  countProfile,
  evidence,
  msr,
  paramBound,
  partitions,
  RelabError,
} from "../src/index.js";

const TOL = 1e-12;

describe("analyze", () => {
  it("matches the closed-form entropies of a tiny sample", () => {
    const report = analyze(["a", "a", "b"]);
    // H[s] = ln 3 - (2/3) ln 2; profile {1: 1, 2: 1} makes H[k] equal to it.
    const expected = Math.log(3) - (2 / 3) * Math.log(2);
    expect(report.result.n).toBe(3);
    expect(report.result.m).toBe(2);
    expect(Math.abs(report.result.resolution - expected)).toBeLessThan(TOL);
    expect(Math.abs(report.result.relevance - expected)).toBeLessThan(TOL);
    expect(Math.abs(report.result.noise)).toBeLessThan(TOL);
  });

  it("reports in bits when asked", () => {
    const nats = analyze(["a", "a", "b", "c"]);
    const bits = analyze(["a", "a", "b", "c"], { base: "bits" });
    expect(
      Math.abs(bits.result.resolution - nats.result.resolution / Math.LN2),
    ).toBeLessThan(TOL);
  });

  it("rejects empty input locally", () => {
    expect(() => analyze([])).toThrow(RangeError);
  });

  it("surfaces CLI analysis errors as RelabError", () => {
    // A single repeated state has degenerate frequency structure.
    expect(() => analyze(["a", "a", "a"])).toThrow(RelabError);
  });
});

describe("countProfile", () => {
  it("satisfies the exact counting identity", () => {
    const labels: string[] = [];
    for (let r = 1; r <= 6; r += 1) {
      for (let i = 0; i < 7 - r; i += 1) labels.push(`s${r}`);
    }
    const { result } = countProfile(labels);
    expect(
      Math.abs(result.log_ws - (result.log_wk + result.log_ws_given_k)),
    ).toBeLessThan(TOL);
    expect(result.log_wk).toBeGreaterThan(0);
  });
});

describe("partitions", () => {
  it("reproduces exact partition counts", () => {
    expect(partitions(12).result.n_partitions).toBe(77);
    expect(partitions(100).result.n_partitions).toBe(190569292);
  });
});

describe("msr", () => {
  it("returns a value in [0, 1/2] and respects tMax", () => {
    const times: number[] = [];
    for (let i = 0; i < 60; i += 1) {
      times.push(50.0 * ((i * 2654435761) % 4096) / 4096);
    }
    times.sort((a, b) => a - b);
    const { result } = msr(times, { tMax: 50.0 });
    expect(result.msr).toBeGreaterThan(0);
    expect(result.msr).toBeLessThanOrEqual(0.5);
  });
});

describe("paramBound", () => {
  it("reproduces known bounds", () => {
    expect(paramBound(100, 1.0).result.r_max).toBe(43);
    expect(paramBound(895, 2.377).result.r_max).toBe(626);
  });
});

describe("evidence", () => {
  it("returns mutually consistent approximation forms", () => {
    const { result } = evidence({
      r: 3,
      n: 500,
      logdet: 1.25,
      logprior: -2.0,
      loglik: -820.5,
    });
    const values = Object.values(result).filter(
      (v): v is number => typeof v === "number",
    );
    expect(values.length).toBeGreaterThan(0);
    for (const v of values) expect(Number.isFinite(v)).toBe(true);
  });
});

import { describe, expect, it } from "vitest";
import { ApiClient, ApiError } from "../src/api.js";

function fakeFetch(handler: (url: string, options?: RequestInit) => Response) {
  const calls: Array<{ url: string; options?: RequestInit }> = [];
  const impl = async (url: string, options?: RequestInit) => {
    calls.push({ url, options });
    return handler(url, options);
  };
  return { impl, calls };
}

describe("ApiClient", () => {
  it("builds the sample URL from the documented parameters", async () => {
    const { impl, calls } = fakeFetch(() => new Response("[]"));
    const client = new ApiClient("http://x", impl);
    await client.fetchSample(10, 7);
    expect(calls[0].url).toBe("http://x/api/sample?per_stratum=10&seed=7");
  });

  it("posts verdicts as the documented JSON body", async () => {
    const { impl, calls } = fakeFetch(() => new Response("{}"));
    const client = new ApiClient("", impl);
    await client.postVerdict("abc123", "valid_pair", "alice");
    expect(calls[0].url).toBe("/api/pair/abc123/verdict");
    expect(JSON.parse(String(calls[0].options?.body))).toEqual({
      classification: "valid_pair",
      reviewer_id: "alice",
    });
  });

  it("raises ApiError with status on HTTP failure", async () => {
    const { impl } = fakeFetch(() => new Response("nope", { status: 404 }));
    const client = new ApiClient("", impl);
    await expect(client.fetchPair("missing")).rejects.toMatchObject({ status: 404 });
  });

  it("wraps network failures in ApiError", async () => {
    const client = new ApiClient("", async () => {
      throw new TypeError("fetch failed");
    });
    await expect(client.fetchReport()).rejects.toBeInstanceOf(ApiError);
  });
});

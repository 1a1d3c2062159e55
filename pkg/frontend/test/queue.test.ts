import { beforeEach, describe, expect, it } from "vitest";

import { TriageQueue } from "../src/queue.js";
import { FakeApi, flush } from "./fake-api.js";

const ids = (n: number, prefix = "img") => Array.from({ length: n }, (_, i) => `${prefix}${i}`);

describe("queue start", () => {
  it("loads the first pending item and the summary", async () => {
    const api = new FakeApi(ids(3));
    const queue = new TriageQueue(api);
    await queue.start();
    expect(queue.current?.image_id).toBe("img0");
    expect(queue.totalAtStart).toBe(3);
    expect(queue.position).toBe(1);
    expect(queue.summary?.overall.pending).toBe(3);
    expect(queue.done).toBe(false);
  });

  it("empty store is a done state, not an error", async () => {
    const queue = new TriageQueue(new FakeApi([]));
    await queue.start();
    expect(queue.done).toBe(true);
    expect(queue.loadError).toBeNull();
  });

  it("network failure surfaces a retryable error", async () => {
    const api = new FakeApi(ids(2));
    api.offline = true;
    const queue = new TriageQueue(api);
    await queue.start();
    expect(queue.loadError).not.toBeNull();
    expect(queue.done).toBe(false);
    api.offline = false;
    await queue.start();
    expect(queue.current?.image_id).toBe("img0");
  });
});

describe("optimistic decisions", () => {
  let api: FakeApi;
  let queue: TriageQueue;

  beforeEach(async () => {
    api = new FakeApi(ids(4));
    queue = new TriageQueue(api);
    await queue.start();
  });

  it("advances immediately and posts in the background", async () => {
    expect(queue.decide("keep")).toBe(true);
    expect(queue.current?.image_id).toBe("img1"); // advanced before the POST resolved
    await flush();
    expect(api.submitted.map((s) => s.image_id)).toEqual(["img0"]);
    expect(api.records.get("img0")?.decision).toBe("keep");
  });

  it("discard without a reason is blocked client-side", async () => {
    expect(queue.decide("discard")).toBe(false);
    expect(queue.decide("discard", "none")).toBe(false);
    expect(queue.current?.image_id).toBe("img0");
    await flush();
    expect(api.submitted).toHaveLength(0);
  });

  it("discard with a reason goes through", async () => {
    expect(queue.decide("discard", "viewing_angle")).toBe(true);
    await flush();
    expect(api.records.get("img0")).toEqual({ decision: "discard", reason: "viewing_angle" });
  });

  it("rapid double-decide submits exactly once", async () => {
    api.holdSubmits = true;
    expect(queue.decide("keep")).toBe(true);
    // user mashes the key before the queue advances/settles
    expect(queue.decide("keep", "none")).toBe(true); // second call decides img1
    api.releaseHeld();
    await flush();
    await flush();
    const submittedIds = api.submitted.map((s) => s.image_id).sort();
    expect(new Set(submittedIds).size).toBe(submittedIds.length);
  });

  it("server rejection re-queues the item at the head with a toast", async () => {
    api.rejectNext = 400;
    const toasts: string[] = [];
    queue.onEvent((event) => {
      if (event.kind === "toast") toasts.push(event.message);
    });
    queue.decide("keep");
    await flush();
    expect(queue.current?.image_id).toBe("img0"); // back at the head
    expect(queue.decidedCount).toBe(0);
    expect(toasts.some((t) => t.includes("rejected"))).toBe(true);
  });

  it("connectivity loss buffers the decision and replays it", async () => {
    api.offline = true;
    queue.decide("keep");
    await flush();
    expect(queue.bufferedCount).toBe(1);
    expect(api.records.get("img0")?.decision).toBe("pending");

    api.offline = false;
    queue.decide("keep"); // next decision triggers the replay first
    await flush();
    expect(queue.bufferedCount).toBe(0);
    expect(api.records.get("img0")?.decision).toBe("keep");
    expect(api.records.get("img1")?.decision).toBe("keep");
    expect(api.submitted.map((s) => s.image_id)).toEqual(["img0", "img1"]);
  });

  it("drains the whole queue", async () => {
    for (let i = 0; i < 4; i++) {
      queue.decide(i % 2 === 0 ? "keep" : "discard", i % 2 === 0 ? "none" : "colour_anomaly");
      await flush();
    }
    await flush();
    expect(queue.done).toBe(true);
    expect(api.submitted).toHaveLength(4);
    expect(queue.summary?.overall.pending).toBe(0);
  });
});

describe("pagination", () => {
  it("advances seamlessly across pages of 50", async () => {
    const api = new FakeApi(ids(100));
    const queue = new TriageQueue(api);
    await queue.start();
    const seen = new Set<string>();
    for (let i = 0; i < 100; i++) {
      const current = queue.current;
      expect(current, `item ${i + 1}`).not.toBeNull();
      seen.add(current!.image_id);
      queue.decide("keep");
      await flush();
      await flush();
    }
    expect(seen.size).toBe(100);
    expect(queue.done).toBe(true);
  });
});

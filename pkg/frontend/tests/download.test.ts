import { afterEach, describe, expect, it, vi } from "vitest";

import { saveBytes } from "../src/download.js";

afterEach(() => {
  vi.restoreAllMocks();
});

describe("download", () => {
  it("saves exactly the bytes handed to it", async () => {
    const exact = new TextEncoder().encode('{"results": [{"id": "0"}]}\n');
    const blobs: FakeBlob[] = [];
    class FakeBlob {
      parts: ArrayBuffer[];
      constructor(parts: ArrayBuffer[]) {
        this.parts = parts;
        blobs.push(this);
      }
    }
    vi.stubGlobal("Blob", FakeBlob);
    vi.stubGlobal("URL", {
      ...URL,
      createObjectURL: () => "blob:fake",
      revokeObjectURL: () => undefined,
    });
    const clicks: string[] = [];
    const origCreate = document.createElement.bind(document);
    vi.spyOn(document, "createElement").mockImplementation((tag: string) => {
      const el = origCreate(tag);
      if (tag === "a") {
        (el as HTMLAnchorElement).click = () => {
          clicks.push((el as HTMLAnchorElement).download);
        };
      }
      return el;
    });

    saveBytes(exact, "bundle.json");
    expect(clicks).toEqual(["bundle.json"]);
    expect(blobs).toHaveLength(1);
    const saved = new Uint8Array(blobs[0].parts[0]);
    expect([...saved]).toEqual([...exact]);
  });
});

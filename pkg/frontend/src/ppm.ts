// Minimal binary-PPM (P6, maxval 255) decoder for the painting snapshots.

export interface DecodedImage {
  width: number;
  height: number;
  rgba: Uint8ClampedArray<ArrayBuffer>; // ready for ImageData
}

export function decodeBase64(data: string): Uint8Array {
  if (typeof atob === "function") {
    const bin = atob(data);
    const bytes = new Uint8Array(bin.length);
    for (let i = 0; i < bin.length; i++) bytes[i] = bin.charCodeAt(i);
    return bytes;
  }
  return new Uint8Array(Buffer.from(data, "base64"));
}

export function decodePpm(bytes: Uint8Array): DecodedImage {
  // header: "P6\n<w> <h>\n255\n" followed by raw RGB
  let pos = 0;
  const readLine = (): string => {
    let end = pos;
    while (end < bytes.length && bytes[end] !== 0x0a) end++;
    const line = new TextDecoder().decode(bytes.subarray(pos, end));
    pos = end + 1;
    return line;
  };
  if (readLine() !== "P6") throw new Error("not a binary P6 document");
  const dims = readLine().split(/\s+/).map(Number);
  const [width, height] = dims;
  if (!Number.isFinite(width) || !Number.isFinite(height)) {
    throw new Error("bad P6 dimensions");
  }
  if (readLine() !== "255") throw new Error("only maxval 255 supported");
  const expected = width * height * 3;
  const rgb = bytes.subarray(pos, pos + expected);
  if (rgb.length !== expected) throw new Error("truncated P6 payload");
  const rgba = new Uint8ClampedArray(width * height * 4);
  for (let i = 0, j = 0; i < expected; i += 3, j += 4) {
    rgba[j] = rgb[i];
    rgba[j + 1] = rgb[i + 1];
    rgba[j + 2] = rgb[i + 2];
    rgba[j + 3] = 255;
  }
  return { width, height, rgba };
}

// Frame encoders producing 512-dim embedding vectors.

import { VideoFrame } from "./y4m";

export const EMBED_DIM = 512;

export interface FrameEncoder {
  name: string;
  encode(frame: VideoFrame): Promise<Float32Array>;
}

function blockMeans(
  plane: Uint8Array,
  width: number,
  height: number,
  grid: number
): Float32Array {
  const out = new Float32Array(grid * grid);
  const counts = new Float32Array(grid * grid);
  for (let r = 0; r < height; r++) {
    const gr = Math.min(Math.floor((r * grid) / height), grid - 1);
    for (let c = 0; c < width; c++) {
      const gc = Math.min(Math.floor((c * grid) / width), grid - 1);
      out[gr * grid + gc] += plane[r * width + c];
      counts[gr * grid + gc] += 1;
    }
  }
  for (let i = 0; i < out.length; i++) {
    out[i] = counts[i] > 0 ? out[i] / counts[i] / 255 : 0;
  }
  return out;
}

function blockStds(
  plane: Uint8Array,
  width: number,
  height: number,
  grid: number
): Float32Array {
  const sum = new Float32Array(grid * grid);
  const sumSq = new Float32Array(grid * grid);
  const counts = new Float32Array(grid * grid);
  for (let r = 0; r < height; r++) {
    const gr = Math.min(Math.floor((r * grid) / height), grid - 1);
    for (let c = 0; c < width; c++) {
      const gc = Math.min(Math.floor((c * grid) / width), grid - 1);
      const v = plane[r * width + c] / 255;
      const i = gr * grid + gc;
      sum[i] += v;
      sumSq[i] += v * v;
      counts[i] += 1;
    }
  }
  const out = new Float32Array(grid * grid);
  for (let i = 0; i < out.length; i++) {
    if (counts[i] > 0) {
      const m = sum[i] / counts[i];
      out[i] = Math.sqrt(Math.max(sumSq[i] / counts[i] - m * m, 0));
    }
  }
  return out;
}

/**
 * Deterministic pixel-statistics encoder: 16x16 luma block means (256),
 * 8x8 chroma block means for U and V (64 each), 8x8 luma block standard
 * deviations (64) and 8x8 block means of the horizontal luma gradient (64).
 * 512 values total, each in [0, 1]. No model weights required.
 */
export const pixelEncoder: FrameEncoder = {
  name: "pixel",
  async encode(frame: VideoFrame): Promise<Float32Array> {
    const { width, height, y, u, v } = frame;
    const cw = width / 2;
    const ch = height / 2;
    const grad = new Uint8Array(width * height);
    for (let r = 0; r < height; r++) {
      for (let c = 1; c < width; c++) {
        grad[r * width + c] = Math.abs(y[r * width + c] - y[r * width + c - 1]);
      }
    }
    const out = new Float32Array(EMBED_DIM);
    out.set(blockMeans(y, width, height, 16), 0);
    out.set(blockMeans(u, cw, ch, 8), 256);
    out.set(blockMeans(v, cw, ch, 8), 320);
    out.set(blockStds(y, width, height, 8), 384);
    out.set(blockMeans(grad, width, height, 8), 448);
    return out;
  },
};

/**
 * CLIP ViT-B/32 image encoder via the optional '@xenova/transformers'
 * dependency. Fails with a descriptive error when the package or its model
 * weights are unavailable.
 */
export const clipEncoder: FrameEncoder = {
  name: "clip",
  async encode(frame: VideoFrame): Promise<Float32Array> {
    let transformers: any;
    try {
      transformers = await import("@xenova/transformers" as string);
    } catch (err) {
      throw new Error(
        "clip encoder requires the optional dependency '@xenova/transformers' " +
          "and its model weights, which are not installed; " +
          "use --encoder pixel or install the package"
      );
    }
    const pipe = await transformers.pipeline(
      "image-feature-extraction",
      "Xenova/clip-vit-base-patch32"
    );
    const rgb = yuv420ToRgb(frame);
    const image = new transformers.RawImage(rgb, frame.width, frame.height, 3);
    const output = await pipe(image);
    return Float32Array.from(output.data as ArrayLike<number>);
  },
};

export function yuv420ToRgb(frame: VideoFrame): Uint8ClampedArray {
  const { width, height, y, u, v } = frame;
  const cw = width / 2;
  const out = new Uint8ClampedArray(width * height * 3);
  for (let r = 0; r < height; r++) {
    for (let c = 0; c < width; c++) {
      const yy = y[r * width + c];
      const uu = u[(r >> 1) * cw + (c >> 1)] - 128;
      const vv = v[(r >> 1) * cw + (c >> 1)] - 128;
      const i = (r * width + c) * 3;
      out[i] = yy + 1.402 * vv;
      out[i + 1] = yy - 0.344136 * uu - 0.714136 * vv;
      out[i + 2] = yy + 1.772 * uu;
    }
  }
  return out;
}

export function getEncoder(name: string): FrameEncoder {
  if (name === "pixel") return pixelEncoder;
  if (name === "clip") return clipEncoder;
  throw new Error(`unknown encoder ${JSON.stringify(name)}, expected "pixel" or "clip"`);
}

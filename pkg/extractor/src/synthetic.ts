// Synthetic test videos: a sequence of static solid-color scenes.

import { Video, VideoFrame } from "./y4m";

// well-separated (Y, U, V) scene colors, cycled when scenes > 6
const PALETTE: Array<[number, number, number]> = [
  [50, 100, 200],
  [200, 150, 60],
  [120, 220, 120],
  [230, 40, 160],
  [80, 180, 40],
  [160, 60, 230],
];

export function solidFrame(
  width: number,
  height: number,
  yuv: [number, number, number]
): VideoFrame {
  return {
    width,
    height,
    y: new Uint8Array(width * height).fill(yuv[0]),
    u: new Uint8Array((width / 2) * (height / 2)).fill(yuv[1]),
    v: new Uint8Array((width / 2) * (height / 2)).fill(yuv[2]),
  };
}

/**
 * Video of `scenes` equal-length static scenes over `seconds` seconds.
 * Frame i belongs to scene floor(i * scenes / nFrames).
 */
export function sceneVideo(
  scenes: number,
  seconds: number,
  fps: number,
  width = 64,
  height = 48
): Video {
  if (!(scenes >= 1) || !(seconds > 0) || !(fps > 0)) {
    throw new Error(`invalid scene video parameters: ${scenes} scenes, ${seconds}s, ${fps} fps`);
  }
  const nFrames = Math.round(seconds * fps);
  if (nFrames < scenes) {
    throw new Error(`${nFrames} frames cannot hold ${scenes} scenes`);
  }
  const frames: VideoFrame[] = [];
  for (let i = 0; i < nFrames; i++) {
    const scene = Math.floor((i * scenes) / nFrames);
    frames.push(solidFrame(width, height, PALETTE[scene % PALETTE.length]));
  }
  return { width, height, fps, frames };
}

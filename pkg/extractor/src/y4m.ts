// Minimal Y4M (YUV4MPEG2) reader and writer, 4:2:0 planar only.

export interface VideoFrame {
  width: number;
  height: number;
  y: Uint8Array; // width * height luma samples
  u: Uint8Array; // (width/2) * (height/2) chroma samples
  v: Uint8Array;
}

export interface Video {
  width: number;
  height: number;
  fps: number;
  frames: VideoFrame[];
}

const MAGIC = "YUV4MPEG2";
const FRAME_MARK = "FRAME";

export function decodeY4m(data: Buffer): Video {
  const headerEnd = data.indexOf(0x0a);
  if (headerEnd < 0) {
    throw new Error("y4m: no stream header line");
  }
  const header = data.subarray(0, headerEnd).toString("ascii");
  const tokens = header.split(" ");
  if (tokens[0] !== MAGIC) {
    throw new Error(`y4m: bad magic ${JSON.stringify(tokens[0])}`);
  }
  let width = 0;
  let height = 0;
  let fps = 0;
  for (const tok of tokens.slice(1)) {
    const tag = tok[0];
    const val = tok.slice(1);
    if (tag === "W") width = parseInt(val, 10);
    else if (tag === "H") height = parseInt(val, 10);
    else if (tag === "F") {
      const [num, den] = val.split(":").map((s) => parseInt(s, 10));
      if (!(num > 0) || !(den > 0)) throw new Error(`y4m: bad frame rate ${tok}`);
      fps = num / den;
    } else if (tag === "C" && !val.startsWith("420")) {
      throw new Error(`y4m: unsupported chroma subsampling C${val}, only 4:2:0`);
    }
  }
  if (!(width > 0) || !(height > 0) || !(fps > 0)) {
    throw new Error(`y4m: incomplete header ${JSON.stringify(header)}`);
  }
  if (width % 2 !== 0 || height % 2 !== 0) {
    throw new Error(`y4m: 4:2:0 requires even dimensions, got ${width}x${height}`);
  }
  const ySize = width * height;
  const cSize = (width / 2) * (height / 2);
  const frames: VideoFrame[] = [];
  let pos = headerEnd + 1;
  while (pos < data.length) {
    const lineEnd = data.indexOf(0x0a, pos);
    if (lineEnd < 0) {
      throw new Error(`y4m: truncated frame header at byte ${pos}`);
    }
    const mark = data.subarray(pos, lineEnd).toString("ascii");
    if (!mark.startsWith(FRAME_MARK)) {
      throw new Error(`y4m: expected FRAME at byte ${pos}, got ${JSON.stringify(mark)}`);
    }
    pos = lineEnd + 1;
    if (pos + ySize + 2 * cSize > data.length) {
      throw new Error(`y4m: truncated frame payload at byte ${pos}`);
    }
    frames.push({
      width,
      height,
      y: Uint8Array.from(data.subarray(pos, pos + ySize)),
      u: Uint8Array.from(data.subarray(pos + ySize, pos + ySize + cSize)),
      v: Uint8Array.from(data.subarray(pos + ySize + cSize, pos + ySize + 2 * cSize)),
    });
    pos += ySize + 2 * cSize;
  }
  if (frames.length === 0) {
    throw new Error("y4m: stream contains no frames");
  }
  return { width, height, fps, frames };
}

export function encodeY4m(video: Video): Buffer {
  const { width, height, fps } = video;
  // represent the rate as a rational with a fixed denominator
  const den = 1000;
  const num = Math.round(fps * den);
  const parts: Buffer[] = [
    Buffer.from(`${MAGIC} W${width} H${height} F${num}:${den} Ip A1:1 C420\n`, "ascii"),
  ];
  for (const f of video.frames) {
    parts.push(Buffer.from(`${FRAME_MARK}\n`, "ascii"));
    parts.push(Buffer.from(f.y), Buffer.from(f.u), Buffer.from(f.v));
  }
  return Buffer.concat(parts);
}

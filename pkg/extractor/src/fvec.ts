// FVEC v1 binary writer. Layout, little-endian:
//   magic "FVEC" | version u16 = 1 | n_frames u32 | dim u32 | fps f32 |
//   n_frames * dim float32 values, row-major

const MAGIC = "FVEC";
const VERSION = 1;
const HEADER_SIZE = 18;

export function encodeFvec(rows: Float32Array[], fps: number): Buffer {
  if (rows.length === 0) {
    throw new Error("fvec: at least one feature row is required");
  }
  const dim = rows[0].length;
  if (dim === 0) {
    throw new Error("fvec: feature rows must be non-empty");
  }
  if (!(fps > 0 && Number.isFinite(fps))) {
    throw new Error(`fvec: fps must be positive and finite, got ${fps}`);
  }
  const buf = Buffer.alloc(HEADER_SIZE + rows.length * dim * 4);
  buf.write(MAGIC, 0, "ascii");
  buf.writeUInt16LE(VERSION, 4);
  buf.writeUInt32LE(rows.length, 6);
  buf.writeUInt32LE(dim, 10);
  buf.writeFloatLE(fps, 14);
  let off = HEADER_SIZE;
  for (const row of rows) {
    if (row.length !== dim) {
      throw new Error(`fvec: ragged rows, got ${row.length} values, expected ${dim}`);
    }
    for (const v of row) {
      if (!Number.isFinite(v)) {
        throw new Error(`fvec: non-finite feature value ${v}`);
      }
      buf.writeFloatLE(v, off);
      off += 4;
    }
  }
  return buf;
}

import { Matrix, matrix } from "./matrix.js";

const MAGIC = "FRMX";
const VERSION = 1;
const HEADER_BYTES = 4 + 1 + 8 + 8;

/**
 * Decode an FRMX buffer: magic "FRMX", version byte 1, u64 LE rows, u64 LE
 * cols, row-major little-endian float64 payload.  Bit-exact for float64.
 */
export function decodeFrmx(buf: Buffer): Matrix {
  if (buf.length < HEADER_BYTES) {
    throw new RangeError("buffer too short to be an FRMX matrix");
  }
  if (buf.toString("latin1", 0, 4) !== MAGIC) {
    throw new RangeError("bad FRMX magic");
  }
  const version = buf.readUInt8(4);
  if (version !== VERSION) {
    throw new RangeError(`unsupported FRMX version ${version}`);
  }
  const rows = Number(buf.readBigUInt64LE(5));
  const cols = Number(buf.readBigUInt64LE(13));
  const expected = rows * cols * 8;
  if (buf.length - HEADER_BYTES !== expected) {
    throw new RangeError(
      `FRMX payload is ${buf.length - HEADER_BYTES} bytes, expected ${expected}`
    );
  }
  const data = new Float64Array(rows * cols);
  for (let k = 0; k < data.length; k++) {
    data[k] = buf.readDoubleLE(HEADER_BYTES + k * 8);
  }
  return matrix(rows, cols, data);
}

export function encodeFrmx(m: Matrix): Buffer {
  const buf = Buffer.alloc(HEADER_BYTES + m.data.length * 8);
  buf.write(MAGIC, 0, "latin1");
  buf.writeUInt8(VERSION, 4);
  buf.writeBigUInt64LE(BigInt(m.rows), 5);
  buf.writeBigUInt64LE(BigInt(m.cols), 13);
  for (let k = 0; k < m.data.length; k++) {
    buf.writeDoubleLE(m.data[k], HEADER_BYTES + k * 8);
  }
  return buf;
}

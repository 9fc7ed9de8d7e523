/** Deterministic 64-bit FNV-1a hash of a response body.
 *
 * History entries store the hash of the exact JSON text the backend sent;
 * replaying a job must reproduce it byte for byte.
 */

const FNV_OFFSET = 0xcbf29ce484222325n;
const FNV_PRIME = 0x100000001b3n;
const MASK64 = 0xffffffffffffffffn;

export function fnv1a64(text: string): string {
  let hash = FNV_OFFSET;
  for (let i = 0; i < text.length; i++) {
    // hash UTF-16 code units byte by byte for full fidelity
    const unit = text.charCodeAt(i);
    hash = ((hash ^ BigInt(unit & 0xff)) * FNV_PRIME) & MASK64;
    hash = ((hash ^ BigInt(unit >> 8)) * FNV_PRIME) & MASK64;
  }
  return hash.toString(16).padStart(16, "0");
}

//! Binary key and ciphertext format.
//!
//! Header: magic "NNRU" (0x4E 0x4E 0x52 0x55), version 0x01, object type
//! (0x01 public key, 0x02 private key, 0x03 ciphertext), then n, k, p, q as
//! 32-bit little-endian. Payload matrices follow in declared order (public:
//! h, H; private: f, g, c, C_p, G_p; ciphertext: 32-bit little-endian block
//! count, then the blocks). Matrices are row-major, polynomials ascending
//! degree, each coefficient a 16-bit little-endian non-negative residue —
//! mod q for h, H, e, f, g, c and mod p for C_p and G_p. The ternary f, g,
//! c are recovered by centering their mod-q residues.

use crate::error::{NnruError, Result};
use crate::matrix::{mat_reduce, MatrixElement};
use crate::params::Params;
use crate::ring::RingElement;
use crate::scheme::{Ciphertext, PrivateKey, PublicKey};

pub const MAGIC: [u8; 4] = *b"NNRU";
pub const VERSION: u8 = 0x01;
pub const TYPE_PUBLIC: u8 = 0x01;
pub const TYPE_PRIVATE: u8 = 0x02;
pub const TYPE_CIPHERTEXT: u8 = 0x03;

fn write_header(out: &mut Vec<u8>, object_type: u8, params: &Params) {
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(object_type);
    for value in [params.n as u32, params.k as u32, params.p as u32, params.q as u32] {
        out.extend_from_slice(&value.to_le_bytes());
    }
}

fn write_matrix(out: &mut Vec<u8>, matrix: &MatrixElement, modulus: i64) {
    let reduced = mat_reduce(matrix, modulus, false);
    for coeff in reduced.coeffs() {
        out.extend_from_slice(&(coeff as u16).to_le_bytes());
    }
}

pub fn serialize_public_key(key: &PublicKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, TYPE_PUBLIC, &key.params);
    write_matrix(&mut out, &key.h, key.params.q);
    write_matrix(&mut out, &key.big_h, key.params.q);
    out
}

pub fn serialize_private_key(key: &PrivateKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, TYPE_PRIVATE, &key.params);
    write_matrix(&mut out, &key.f, key.params.q);
    write_matrix(&mut out, &key.g, key.params.q);
    write_matrix(&mut out, &key.c, key.params.q);
    write_matrix(&mut out, &key.c_p, key.params.p);
    write_matrix(&mut out, &key.g_p, key.params.p);
    out
}

/// Serializes a ciphertext block sequence. All blocks must share `params`.
pub fn serialize_ciphertexts(params: &Params, blocks: &[Ciphertext]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    write_header(&mut out, TYPE_CIPHERTEXT, params);
    let count = u32::try_from(blocks.len())
        .map_err(|_| NnruError::InvalidParams("more than 2³²−1 ciphertext blocks".into()))?;
    out.extend_from_slice(&count.to_le_bytes());
    for block in blocks {
        if block.params != *params {
            return Err(NnruError::ParamsMismatch(
                "ciphertext blocks disagree on parameters".into(),
            ));
        }
        write_matrix(&mut out, &block.e, params.q);
    }
    Ok(out)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Reader { bytes, pos: 0 }
    }

    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.pos + len > self.bytes.len() {
            return Err(NnruError::FormatError(format!(
                "unexpected end of data at byte {} (wanted {} more)",
                self.pos, len
            )));
        }
        let slice = &self.bytes[self.pos..self.pos + len];
        self.pos += len;
        Ok(slice)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(NnruError::FormatError(format!(
                "{} trailing bytes after payload",
                self.bytes.len() - self.pos
            )));
        }
        Ok(())
    }
}

fn read_header(reader: &mut Reader, expected_type: u8) -> Result<Params> {
    let magic = reader.take(4)?;
    if magic != MAGIC {
        return Err(NnruError::FormatError(format!(
            "bad magic {magic:02x?}, expected \"NNRU\""
        )));
    }
    let version = reader.u8()?;
    if version != VERSION {
        return Err(NnruError::FormatError(format!(
            "unsupported version {version}"
        )));
    }
    let object_type = reader.u8()?;
    if object_type != expected_type {
        return Err(NnruError::FormatError(format!(
            "object type {object_type:#04x}, expected {expected_type:#04x}"
        )));
    }
    let n = reader.u32()? as usize;
    let k = reader.u32()? as usize;
    let p = reader.u32()? as i64;
    let q = reader.u32()? as i64;
    let params = Params::from_header(n, k, p, q);
    params.validate().map_err(|e| {
        NnruError::FormatError(format!("header parameters rejected: {e}"))
    })?;
    Ok(params)
}

fn read_matrix(reader: &mut Reader, params: &Params, modulus: i64) -> Result<MatrixElement> {
    let mut entries = Vec::with_capacity(params.k * params.k);
    for _ in 0..params.k * params.k {
        let mut coeffs = Vec::with_capacity(params.n);
        for _ in 0..params.n {
            let raw = reader.u16()? as i64;
            if raw >= modulus {
                return Err(NnruError::FormatError(format!(
                    "coefficient {raw} outside [0, {modulus})"
                )));
            }
            coeffs.push(raw);
        }
        entries.push(RingElement::from_coeffs(coeffs));
    }
    Ok(MatrixElement::from_entries(params.k, params.n, entries))
}

pub fn parse_public_key(bytes: &[u8]) -> Result<PublicKey> {
    let mut reader = Reader::new(bytes);
    let params = read_header(&mut reader, TYPE_PUBLIC)?;
    let h = read_matrix(&mut reader, &params, params.q)?;
    let big_h = read_matrix(&mut reader, &params, params.q)?;
    reader.finish()?;
    Ok(PublicKey { h, big_h, params })
}

pub fn parse_private_key(bytes: &[u8]) -> Result<PrivateKey> {
    let mut reader = Reader::new(bytes);
    let params = read_header(&mut reader, TYPE_PRIVATE)?;
    let f = mat_reduce(&read_matrix(&mut reader, &params, params.q)?, params.q, true);
    let g = mat_reduce(&read_matrix(&mut reader, &params, params.q)?, params.q, true);
    let c = mat_reduce(&read_matrix(&mut reader, &params, params.q)?, params.q, true);
    let c_p = read_matrix(&mut reader, &params, params.p)?;
    let g_p = read_matrix(&mut reader, &params, params.p)?;
    reader.finish()?;
    Ok(PrivateKey {
        f,
        g,
        c,
        c_p,
        g_p,
        params,
    })
}

pub fn parse_ciphertexts(bytes: &[u8]) -> Result<Vec<Ciphertext>> {
    let mut reader = Reader::new(bytes);
    let params = read_header(&mut reader, TYPE_CIPHERTEXT)?;
    let count = reader.u32()? as usize;
    let mut blocks = Vec::with_capacity(count.min(1 << 16));
    for _ in 0..count {
        let e = read_matrix(&mut reader, &params, params.q)?;
        blocks.push(Ciphertext { e, params });
    }
    reader.finish()?;
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Preset;
    use crate::rng::Streams;
    use crate::sample::sample_plaintext;
    use crate::scheme::{encrypt, keygen};

    fn toy_pair(seed: u64) -> (PublicKey, PrivateKey) {
        let params = Preset::Toy.params();
        keygen(&params, &mut Streams::new(seed).stream("keygen", 0)).unwrap()
    }

    #[test]
    fn header_layout_is_fixed() {
        let (public, _) = toy_pair(1);
        let bytes = serialize_public_key(&public);
        assert_eq!(&bytes[..4], b"NNRU");
        assert_eq!(bytes[4], 0x01);
        assert_eq!(bytes[5], 0x01);
        assert_eq!(&bytes[6..10], &7u32.to_le_bytes());
        assert_eq!(&bytes[10..14], &2u32.to_le_bytes());
        assert_eq!(&bytes[14..18], &3u32.to_le_bytes());
        assert_eq!(&bytes[18..22], &512u32.to_le_bytes());
        // header + two matrices of n·k² u16 coefficients
        assert_eq!(bytes.len(), 22 + 2 * 2 * 28);
    }

    #[test]
    fn public_key_round_trips() {
        let (public, _) = toy_pair(2);
        let parsed = parse_public_key(&serialize_public_key(&public)).unwrap();
        assert_eq!(parsed, public);
    }

    #[test]
    fn private_key_round_trips() {
        let (_, private) = toy_pair(3);
        let parsed = parse_private_key(&serialize_private_key(&private)).unwrap();
        assert_eq!(parsed, private);
    }

    #[test]
    fn ciphertexts_round_trip() {
        let params = Preset::Toy.params();
        let (public, _) = toy_pair(4);
        let streams = Streams::new(4);
        let blocks: Vec<Ciphertext> = (0..3)
            .map(|i| {
                let mut rng = streams.stream("block", i);
                let m = sample_plaintext(&params, &mut rng);
                encrypt(&public, &m, &mut rng).unwrap()
            })
            .collect();
        let bytes = serialize_ciphertexts(&params, &blocks).unwrap();
        assert_eq!(parse_ciphertexts(&bytes).unwrap(), blocks);
    }

    #[test]
    fn serialization_is_byte_stable() {
        let (public_a, private_a) = toy_pair(5);
        let (public_b, private_b) = toy_pair(5);
        assert_eq!(serialize_public_key(&public_a), serialize_public_key(&public_b));
        assert_eq!(
            serialize_private_key(&private_a),
            serialize_private_key(&private_b)
        );
    }

    #[test]
    fn corrupted_inputs_are_rejected() {
        let (public, _) = toy_pair(6);
        let good = serialize_public_key(&public);

        let mut bad_magic = good.clone();
        bad_magic[0] = b'X';
        assert!(matches!(
            parse_public_key(&bad_magic),
            Err(NnruError::FormatError(_))
        ));

        let mut bad_version = good.clone();
        bad_version[4] = 9;
        assert!(parse_public_key(&bad_version).is_err());

        let mut bad_type = good.clone();
        bad_type[5] = TYPE_CIPHERTEXT;
        assert!(parse_public_key(&bad_type).is_err());

        let truncated = &good[..good.len() - 1];
        assert!(matches!(
            parse_public_key(truncated),
            Err(NnruError::FormatError(_))
        ));

        let mut trailing = good.clone();
        trailing.push(0);
        assert!(parse_public_key(&trailing).is_err());

        // coefficient at the q boundary
        let mut out_of_range = good;
        let offset = 22;
        out_of_range[offset..offset + 2].copy_from_slice(&512u16.to_le_bytes());
        assert!(parse_public_key(&out_of_range).is_err());
    }

    #[test]
    fn parsed_private_key_decrypts() {
        let params = Preset::Toy.params();
        let (public, private) = toy_pair(7);
        let mut rng = Streams::new(7).stream("message", 0);
        let m = sample_plaintext(&params, &mut rng);
        let e = encrypt(&public, &m, &mut rng).unwrap();
        let parsed = parse_private_key(&serialize_private_key(&private)).unwrap();
        assert_eq!(crate::scheme::decrypt(&parsed, &e).unwrap(), m);
    }
}

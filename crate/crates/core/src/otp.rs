//! Vernam one-time pad.

use crate::bits::Bitstring;
use crate::error::ProtocolError;

/// Bitwise XOR of `text` and `key`. Encryption and decryption are the same
/// operation.
///
/// ```
/// use qkdsim::{otp::otp_xor, Bitstring};
/// let p: Bitstring = "0110 0101 1101".parse().unwrap();
/// let k: Bitstring = "1010 1110 0100".parse().unwrap();
/// let c = otp_xor(&p, &k).unwrap();
/// assert_eq!(c.to_string(), "110010111001");
/// assert_eq!(otp_xor(&c, &k).unwrap(), p);
/// ```
pub fn otp_xor(text: &Bitstring, key: &Bitstring) -> Result<Bitstring, ProtocolError> {
    if text.len() != key.len() {
        return Err(ProtocolError::LengthMismatch {
            left: text.len(),
            right: key.len(),
        });
    }
    Ok(text.as_bools().iter().zip(key.as_bools()).map(|(t, k)| t ^ k).collect())
}

/// Byte-level pad for files: `text[i] ^ key[i]`.
pub fn otp_xor_bytes(text: &[u8], key: &[u8]) -> Result<Vec<u8>, ProtocolError> {
    if text.len() != key.len() {
        return Err(ProtocolError::LengthMismatch {
            left: text.len(),
            right: key.len(),
        });
    }
    Ok(text.iter().zip(key).map(|(t, k)| t ^ k).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_key_is_identity() {
        let p: Bitstring = "0110 0101 1101".parse().unwrap();
        assert_eq!(otp_xor(&p, &Bitstring::zeros(12)).unwrap(), p);
    }

    #[test]
    fn reused_key_leaks_plaintext_xor() {
        let p1: Bitstring = "0110 0101 1101".parse().unwrap();
        let p2: Bitstring = "1111 0000 1010".parse().unwrap();
        let k: Bitstring = "1010 1110 0100".parse().unwrap();
        let c1 = otp_xor(&p1, &k).unwrap();
        let c2 = otp_xor(&p2, &k).unwrap();
        assert_eq!(otp_xor(&c1, &c2).unwrap(), otp_xor(&p1, &p2).unwrap());
    }

    #[test]
    fn length_checked() {
        let a: Bitstring = "01".parse().unwrap();
        assert_eq!(
            otp_xor(&a, &Bitstring::zeros(3)),
            Err(ProtocolError::LengthMismatch { left: 2, right: 3 })
        );
        assert!(otp_xor_bytes(&[1, 2], &[3]).is_err());
        assert_eq!(otp_xor_bytes(&[0xf0], &[0xff]).unwrap(), vec![0x0f]);
    }
}

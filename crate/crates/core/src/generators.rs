//! Test-corpus generators: Hamming codes, Vasil'ev codes and their parity
//! extensions. Every generator is deterministic in its parameters.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::word::{extend_parity, validate_perfect, Code, Word};

/// Largest Hamming parameter whose code is materialized (length 15).
pub const MAX_MATERIALIZED_M: u32 = 4;

/// Codes of this length or longer are refused by every generator.
pub const MAX_LENGTH: usize = 31;

/// Hamming code of length `2^m - 1`: the words with zero syndrome under the
/// parity-check matrix whose `i`-th column is `i` in binary.
///
/// `m` must lie in `3..=6`; `m >= 5` is a valid parameter but the code
/// (2^26 words and up) is refused as beyond desk scale.
pub fn gen_hamming(m: u32) -> Result<Code> {
    if !(3..=6).contains(&m) {
        return Err(Error::InvalidParameter(format!("hamming m = {m}, expected 3..=6")));
    }
    if m > MAX_MATERIALIZED_M {
        return Err(Error::Unsupported(format!(
            "hamming m = {m} has 2^{} codewords",
            (1usize << m) - 1 - m as usize
        )));
    }
    let n = (1usize << m) - 1;
    let info: Vec<usize> = (1..=n).filter(|c| !c.is_power_of_two()).collect();
    let mut code = Code::new(n)?;
    for k in 0u64..1 << info.len() {
        let mut bits = 0u64;
        let mut syndrome = 0usize;
        for (j, &c) in info.iter().enumerate() {
            if k >> j & 1 == 1 {
                bits |= 1 << (c - 1);
                syndrome ^= c;
            }
        }
        for p in 0..m {
            if syndrome >> p & 1 == 1 {
                bits |= 1 << ((1usize << p) - 1);
            }
        }
        code.insert(Word::from_bits_unchecked(n, bits))?;
    }
    Ok(code)
}

/// Parameters of a Vasil'ev code: a 1-perfect base code and a boolean
/// function on its codewords, tabulated in the base's insertion order.
#[derive(Clone, Debug)]
pub struct VasilevSpec {
    pub base: Code,
    pub f: Vec<bool>,
    pub seed: Option<u64>,
}

impl VasilevSpec {
    /// `f = 0`; the result is linear when the base is.
    pub fn linear(base: Code) -> Self {
        let f = vec![false; base.len()];
        VasilevSpec { base, f, seed: None }
    }

    pub fn with_table(base: Code, f: Vec<bool>) -> Self {
        VasilevSpec { base, f, seed: None }
    }

    /// `f` is the indicator of one nonzero base codeword chosen by `seed`.
    pub fn seeded(base: Code, seed: u64) -> Result<Self> {
        let candidates: Vec<usize> = (0..base.len()).filter(|&i| !base.word(i).is_zero()).collect();
        if candidates.is_empty() {
            return Err(Error::InvalidParameter("base code has no nonzero codeword".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pick = candidates[rng.gen_range(0..candidates.len())];
        let mut f = vec![false; base.len()];
        f[pick] = true;
        Ok(VasilevSpec {
            base,
            f,
            seed: Some(seed),
        })
    }
}

/// Vasil'ev code `{(u, u + y, |u| + f(y)) : u in F_2^n, y in base}` of
/// length `2n + 1`.
pub fn gen_vasilev(spec: &VasilevSpec) -> Result<Code> {
    let base = &spec.base;
    let n = base.length();
    let check = validate_perfect(base);
    if !check.ok {
        return Err(Error::InvalidParameter(format!(
            "Vasil'ev base is not 1-perfect: {}",
            check.reason.unwrap_or_default()
        )));
    }
    if spec.f.len() != base.len() {
        return Err(Error::InvalidParameter(format!(
            "f has {} entries for {} base codewords",
            spec.f.len(),
            base.len()
        )));
    }
    let len = 2 * n + 1;
    if len >= MAX_LENGTH {
        return Err(Error::Unsupported(format!(
            "Vasil'ev length {len} has 2^{} codewords",
            len - n - 1 + (base.len().trailing_zeros() as usize)
        )));
    }
    let mut code = Code::new(len)?;
    for (y, &fy) in base.words().iter().zip(&spec.f) {
        for u in 0u64..1 << n {
            let parity = (u.count_ones() & 1 == 1) ^ fy;
            let bits = u | (u ^ y.bits()) << n | (parity as u64) << (2 * n);
            code.insert(Word::from_bits_unchecked(len, bits))?;
        }
    }
    Ok(code)
}

/// Generator families addressable from the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Hamming code of length `2^m - 1`.
    Hamming { m: u32 },
    /// Vasil'ev code of length `2^m - 1` over the Hamming code of length
    /// `2^(m-1) - 1`; `seed: None` means `f = 0`.
    Vasilev { m: u32, seed: Option<u64> },
}

pub fn gen_family(family: Family) -> Result<Code> {
    match family {
        Family::Hamming { m } => gen_hamming(m),
        Family::Vasilev { m, seed } => {
            if m < 4 {
                return Err(Error::InvalidParameter(format!("vasilev m = {m}, expected >= 4")));
            }
            let base = gen_hamming(m - 1)?;
            let spec = match seed {
                Some(s) => VasilevSpec::seeded(base, s)?,
                None => VasilevSpec::linear(base),
            };
            gen_vasilev(&spec)
        }
    }
}

/// Parity extension of a family member.
pub fn gen_extended(family: Family) -> Result<Code> {
    extend_parity(&gen_family(family)?)
}

//! Universal Witt structure polynomials: generation, caching, evaluation.
//!
//! Generation runs the ghost recursion over the integers: the table for an
//! operation `⋆` consists of polynomials `T_0, …, T_{m−1}` with
//! `w_k(T_0, …, T_k) = w_k(X) ⋆ w_k(Y)` for every ghost index `k`, solved
//! top-down with exact division by `p^k` (an inexact division aborts — it
//! can only happen through a bug). Coefficients are then reduced mod `p`,
//! which is the only form the runtime ever evaluates: all runtime coefficient
//! rings have characteristic `p`. Tables are cached on disk in a versioned
//! canonical text format that round-trips bit-exactly.

use super::intpoly::{ghost_poly, Expos, IntPoly};
use crate::error::Error;
use crate::Result;
use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

const CACHE_HEADER: &str = "WITTRAM-TABLE v1";

/// Witt length and prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct WittParams {
    pub p: u64,
    pub m: u8,
}

impl WittParams {
    pub fn new(p: u64, m: u8) -> Result<Self> {
        crate::caps::check_p(p)?;
        crate::caps::check_m(m)?;
        Ok(WittParams { p, m })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum OpKind {
    Add,
    Neg,
    Mul,
    /// The paper's `F: W_{m+1} → W_m`; the table takes `m + 1` input
    /// variables and produces `m` output coordinates.
    Frobenius,
}

impl OpKind {
    pub fn name(self) -> &'static str {
        match self {
            OpKind::Add => "add",
            OpKind::Neg => "neg",
            OpKind::Mul => "mul",
            OpKind::Frobenius => "frobenius",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "add" => Ok(OpKind::Add),
            "neg" => Ok(OpKind::Neg),
            "mul" => Ok(OpKind::Mul),
            "frobenius" => Ok(OpKind::Frobenius),
            _ => Err(Error::parse(format!("unknown op kind: {s}"))),
        }
    }
}

/// One output coordinate: sparse polynomial with coefficients in `0..p`.
pub type ModPoly = Vec<(Expos, u8)>;

/// Structure polynomials for one `(p, m, kind)`, coefficients mod `p`.
///
/// Variable layout: binary kinds use `X_0..X_{m−1}, Y_0..Y_{m−1}` (ghost
/// order, variable `j` = ghost index `j`, variable `m+j` = second input);
/// `neg` uses `m` variables; `frobenius` uses `m + 1` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructurePolynomialTable {
    pub params: WittParams,
    pub kind: OpKind,
    pub nvars: usize,
    /// `polys[k]` computes output ghost coordinate `k`.
    pub polys: Vec<ModPoly>,
}

impl StructurePolynomialTable {
    /// Generate by ghost recursion over the integers.
    pub fn generate(params: WittParams, kind: OpKind) -> Result<Self> {
        let m = params.m as usize;
        let p = params.p;
        let (nvars, nout) = match kind {
            OpKind::Add | OpKind::Mul => (2 * m, m),
            OpKind::Neg => (m, m),
            OpKind::Frobenius => (m + 1, m),
        };
        // Exact integer solutions S_0..S_{k}; reduce mod p at the end.
        let mut solved: Vec<IntPoly> = Vec::with_capacity(nout);
        for k in 0..nout {
            // target ghost value at index k
            let mut target = match kind {
                OpKind::Add => {
                    let mut t = ghost_poly(nvars, 0, p, k as u32)?;
                    t.add_assign(&ghost_poly(nvars, m, p, k as u32)?)?;
                    t
                }
                OpKind::Neg => {
                    let t = ghost_poly(nvars, 0, p, k as u32)?;
                    t.scale(&(-num_bigint::BigInt::from(1)))
                }
                OpKind::Mul => {
                    let a = ghost_poly(nvars, 0, p, k as u32)?;
                    let b = ghost_poly(nvars, m, p, k as u32)?;
                    a.mul(&b)?
                }
                // w_k(F(a)) = w_{k+1}(a)
                OpKind::Frobenius => ghost_poly(nvars, 0, p, k as u32 + 1)?,
            };
            // subtract Σ_{j<k} p^j · S_j^{p^{k−j}}
            for (j, s) in solved.iter().enumerate().take(k) {
                let pw = u64::from(p as u32)
                    .checked_pow((k - j) as u32)
                    .ok_or_else(|| Error::internal("power overflow"))?;
                let term = s.pow(pw)?.scale(&num_bigint::BigInt::from(p).pow(j as u32));
                target.sub_assign(&term)?;
            }
            solved.push(target.exact_div_pow(p, k as u32)?);
        }
        let polys = solved.iter().map(|s| s.reduce_mod_p(p)).collect();
        Ok(StructurePolynomialTable {
            params,
            kind,
            nvars,
            polys,
        })
    }

    // ── Canonical text encoding (bit-exact round trip) ──────────────────

    pub fn encode(&self) -> String {
        let mut out = String::new();
        out.push_str(CACHE_HEADER);
        out.push('\n');
        out.push_str(&format!(
            "p {}\nm {}\nkind {}\nvars {}\noutputs {}\n",
            self.params.p,
            self.params.m,
            self.kind.name(),
            self.nvars,
            self.polys.len()
        ));
        for (k, poly) in self.polys.iter().enumerate() {
            out.push_str(&format!("poly {} terms {}\n", k, poly.len()));
            for (exps, c) in poly {
                out.push_str(&c.to_string());
                for e in exps {
                    out.push(' ');
                    out.push_str(&e.to_string());
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn decode(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let bad = |msg: &str| Error::Cache(format!("table cache: {msg}"));
        if lines.next() != Some(CACHE_HEADER) {
            return Err(bad("bad header"));
        }
        let mut field = |name: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| bad("truncated header"))?;
            line.strip_prefix(name)
                .and_then(|s| s.strip_prefix(' '))
                .map(str::to_string)
                .ok_or_else(|| bad(&format!("expected field {name}")))
        };
        let p: u64 = field("p")?.parse().map_err(|_| bad("bad p"))?;
        let m: u8 = field("m")?.parse().map_err(|_| bad("bad m"))?;
        let kind = OpKind::parse(&field("kind")?)?;
        let nvars: usize = field("vars")?.parse().map_err(|_| bad("bad vars"))?;
        let nout: usize = field("outputs")?.parse().map_err(|_| bad("bad outputs"))?;
        let params = WittParams::new(p, m)?;
        let mut polys = Vec::with_capacity(nout);
        for k in 0..nout {
            let header = lines.next().ok_or_else(|| bad("truncated poly header"))?;
            let expect = format!("poly {k} terms ");
            let nterms: usize = header
                .strip_prefix(&expect)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("bad poly header"))?;
            let mut poly = Vec::with_capacity(nterms);
            for _ in 0..nterms {
                let line = lines.next().ok_or_else(|| bad("truncated poly body"))?;
                let mut it = line.split(' ');
                let c: u8 = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad("bad coefficient"))?;
                let exps: Expos = it
                    .map(|s| s.parse::<u16>().map_err(|_| bad("bad exponent")))
                    .collect::<Result<_>>()?;
                if exps.len() != nvars {
                    return Err(bad("wrong exponent arity"));
                }
                poly.push((exps, c));
            }
            polys.push(poly);
        }
        if lines.next().is_some() {
            return Err(bad("trailing data"));
        }
        let table = StructurePolynomialTable {
            params,
            kind,
            nvars,
            polys,
        };
        Ok(table)
    }
}

impl fmt::Display for StructurePolynomialTable {
    /// Human-readable rendering, e.g. `S_1 = X_1 + Y_1 + X_0*Y_0` (mod p).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.params.m as usize;
        let letter = |v: usize| -> String {
            match self.kind {
                OpKind::Add | OpKind::Mul => {
                    if v < m {
                        format!("X_{v}")
                    } else {
                        format!("Y_{}", v - m)
                    }
                }
                _ => format!("X_{v}"),
            }
        };
        let out_letter = match self.kind {
            OpKind::Add => "S",
            OpKind::Neg => "N",
            OpKind::Mul => "P",
            OpKind::Frobenius => "F",
        };
        for (k, poly) in self.polys.iter().enumerate() {
            write!(f, "{out_letter}_{k} =")?;
            if poly.is_empty() {
                write!(f, " 0")?;
            }
            for (t, (exps, c)) in poly.iter().enumerate() {
                if t > 0 {
                    write!(f, " +")?;
                }
                let mut factors = Vec::new();
                if *c != 1 || exps.iter().all(|&e| e == 0) {
                    factors.push(c.to_string());
                }
                for (v, &e) in exps.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(letter(v)),
                        _ => factors.push(format!("{}^{}", letter(v), e)),
                    }
                }
                write!(f, " {}", factors.join("*"))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

// ── Disk + memory cache ─────────────────────────────────────────────────

/// Caching provider of structure tables. In-memory memo always on; disk
/// layer optional (one canonical-text file per `(p, m, kind)`).
pub struct TableStore {
    cache_dir: Option<PathBuf>,
    memo: Mutex<HashMap<(u64, u8, OpKind), Arc<StructurePolynomialTable>>>,
}

impl TableStore {
    pub fn new(cache_dir: Option<PathBuf>) -> Self {
        TableStore {
            cache_dir,
            memo: Mutex::new(HashMap::new()),
        }
    }

    /// Honors the `WITTRAM_CACHE` environment variable; memory-only when
    /// unset.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os("WITTRAM_CACHE").map(PathBuf::from))
    }

    pub fn cache_file(&self, params: WittParams, kind: OpKind) -> Option<PathBuf> {
        self.cache_dir
            .as_ref()
            .map(|d| d.join(format!("{}_p{}_m{}.wtab", kind.name(), params.p, params.m)))
    }

    pub fn get(
        &self,
        params: WittParams,
        kind: OpKind,
    ) -> Result<Arc<StructurePolynomialTable>> {
        let key = (params.p, params.m, kind);
        if let Some(t) = self.memo.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        // Try disk.
        if let Some(path) = self.cache_file(params, kind) {
            if let Ok(text) = std::fs::read_to_string(&path) {
                match StructurePolynomialTable::decode(&text) {
                    Ok(t) if t.params == params && t.kind == kind => {
                        let t = Arc::new(t);
                        self.memo.lock().unwrap().insert(key, t.clone());
                        return Ok(t);
                    }
                    // Corrupt or mismatched: fall through and regenerate.
                    _ => {}
                }
            }
        }
        let table = Arc::new(StructurePolynomialTable::generate(params, kind)?);
        if let Some(path) = self.cache_file(params, kind) {
            // Atomic-ish write; failures to persist are not fatal.
            let _ = write_atomic(&path, &table.encode());
        }
        self.memo.lock().unwrap().insert(key, table.clone());
        Ok(table)
    }
}

fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_table_p2_m2_matches_hand_computation() {
        let t = StructurePolynomialTable::generate(WittParams::new(2, 2).unwrap(), OpKind::Add)
            .unwrap();
        // S_0 = X_0 + Y_0 (X at vars 0..m, Y at vars m..2m)
        assert_eq!(
            t.polys[0],
            vec![(vec![0, 0, 1, 0], 1), (vec![1, 0, 0, 0], 1)]
        );
        // S_1 = X_1 + Y_1 + X_0·Y_0 (mod 2)
        let mut s1 = t.polys[1].clone();
        s1.sort();
        let mut expect = vec![
            (vec![0u16, 1, 0, 0], 1u8),
            (vec![0, 0, 0, 1], 1),
            (vec![1, 0, 1, 0], 1),
        ];
        expect.sort();
        assert_eq!(s1, expect);
    }

    #[test]
    fn m1_tables_are_the_ring_ops() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let t =
                StructurePolynomialTable::generate(WittParams::new(p, 1).unwrap(), OpKind::Add)
                    .unwrap();
            assert_eq!(t.polys[0], vec![(vec![0, 1], 1), (vec![1, 0], 1)]);
            let t =
                StructurePolynomialTable::generate(WittParams::new(p, 1).unwrap(), OpKind::Mul)
                    .unwrap();
            assert_eq!(t.polys[0], vec![(vec![1, 1], 1)]);
        }
    }

    #[test]
    fn encode_decode_round_trip_bit_exact() {
        for kind in [OpKind::Add, OpKind::Neg, OpKind::Mul, OpKind::Frobenius] {
            let t =
                StructurePolynomialTable::generate(WittParams::new(3, 3).unwrap(), kind).unwrap();
            let enc = t.encode();
            let dec = StructurePolynomialTable::decode(&enc).unwrap();
            assert_eq!(t, dec);
            assert_eq!(enc, dec.encode(), "round trip must be bit-exact");
        }
    }

    #[test]
    fn disk_cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let store = TableStore::new(Some(dir.path().to_path_buf()));
        let params = WittParams::new(2, 3).unwrap();
        let a = store.get(params, OpKind::Mul).unwrap();
        // Fresh store must read the same table back from disk.
        let store2 = TableStore::new(Some(dir.path().to_path_buf()));
        let b = store2.get(params, OpKind::Mul).unwrap();
        assert_eq!(*a, *b);
        let path = store.cache_file(params, OpKind::Mul).unwrap();
        assert!(path.exists());
        let text = std::fs::read_to_string(path).unwrap();
        assert_eq!(text, a.encode());
    }
}

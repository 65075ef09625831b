//! The single-computation subcommands: structure-polynomial tables,
//! conductors, graded dimension tables and T-space windows.
//!
//! Every command validates its parameters against the engine caps before
//! building a context, prints UTF-8 JSON or an aligned text table, and
//! returns the process exit code (0 ok, 2 falsified, 3 inconclusive
//! precision, 64 usage).

use serde::Serialize;
use std::path::PathBuf;

use wittram_core::caps;
use wittram_core::drw::{level_at, DrwCtx};
use wittram_core::filtration::graded_basis;
use wittram_core::fq::FqField;
use wittram_core::ramification::{asw_conductor, asw_conductor_oracle, t_space, AswClass};
use wittram_core::series::TruncSeries;
use wittram_core::witt::{OpKind, StructurePolynomialTable, TableStore, WittParams, WittVector};
use wittram_core::{Error, Result};

/// Validated parameters of a single computation run.
pub struct RunConfig {
    pub p: u64,
    pub e: u8,
    pub m: u8,
    pub q: u8,
}

impl RunConfig {
    pub fn new(p: u64, e: u8, m: u8, q: u8) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::parse(format!("p must be prime (got {p})")));
        }
        caps::check_p(p)?;
        caps::check_e(e)?;
        caps::check_m(m)?;
        caps::check_q(q)?;
        Ok(RunConfig { p, e, m, q })
    }

    pub fn ctx(&self) -> Result<DrwCtx> {
        DrwCtx::new(FqField::new(self.p, self.e)?, self.m)
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

#[derive(Serialize)]
struct FieldDesc {
    p: u64,
    e: u8,
}

// ── witt-tables ─────────────────────────────────────────────────────────

pub fn cmd_witt_tables(p: u64, m: u8, kind: &str, cache_dir: Option<PathBuf>) -> Result<i32> {
    if !is_prime(p) {
        return Err(Error::parse(format!("p must be prime (got {p})")));
    }
    let params = WittParams::new(p, m)?;
    let kind = OpKind::parse(kind)?;
    let dir = cache_dir.or_else(|| std::env::var_os("WITTRAM_CACHE").map(PathBuf::from));
    let store = TableStore::new(dir);

    let cache_path = store.cache_file(params, kind);
    let hit = cache_path.as_deref().is_some_and(|path| {
        std::fs::read_to_string(path)
            .ok()
            .and_then(|text| StructurePolynomialTable::decode(&text).ok())
            .is_some_and(|t| t.params == params && t.kind == kind)
    });

    let table = store.get(params, kind)?;
    let terms: Vec<usize> = table.polys.iter().map(|poly| poly.len()).collect();
    let total: usize = terms.iter().sum();
    let term_list: Vec<String> = terms.iter().map(|t| t.to_string()).collect();

    println!("table    {} (p = {}, m = {})", kind.name(), p, m);
    println!("vars     {}", table.nvars);
    println!("outputs  {}", table.polys.len());
    println!("terms    {} = {}", term_list.join(" + "), total);
    match cache_path {
        Some(path) => println!(
            "cache    {} ({})",
            path.display(),
            if hit { "cache hit" } else { "written" }
        ),
        None => println!("cache    memory only (set WITTRAM_CACHE or --cache-dir to persist)"),
    }
    Ok(0)
}

// ── conductor ───────────────────────────────────────────────────────────

#[derive(Serialize)]
struct ConductorRecord {
    field: FieldDesc,
    m: u8,
    witt: Vec<String>,
    conductor: i64,
    oracle_checked: bool,
}

pub fn cmd_conductor(p: u64, e: u8, m: u8, coords: &[String], no_oracle: bool) -> Result<i32> {
    let cfg = RunConfig::new(p, e, m, 0)?;
    if coords.len() != m as usize {
        return Err(Error::parse(format!(
            "expected {m} Witt coordinates (Teichmüller position first), got {}",
            coords.len()
        )));
    }
    let ctx = cfg.ctx()?;
    let field = ctx.field().clone();
    let parsed: Vec<TruncSeries> = coords
        .iter()
        .map(|s| TruncSeries::parse(&field, s))
        .collect::<Result<_>>()?;

    // irrelevant for the conductor itself, but it bounds the oracle search
    let mut pole = 0i64;
    for c in &parsed {
        if let Some((k, _)) = c.iter().next() {
            pole = pole.max(-k);
        }
    }

    let class = AswClass::new(WittVector { coords: parsed });
    let conductor = asw_conductor(&ctx, &class)?;

    let mut oracle_checked = false;
    if !no_oracle {
        let bound = pole.max(1);
        let slots = (m as i64 * bound) as u32;
        let feasible = field.q().checked_pow(slots).is_some_and(|t| t <= 1 << 18);
        if feasible {
            let slow = asw_conductor_oracle(&ctx, &class, bound)?;
            if slow != conductor {
                return Err(Error::internal(format!(
                    "conductor reduction gives {conductor} but the brute-force \
                     oracle gives {slow}"
                )));
            }
            oracle_checked = true;
        }
    }

    let record = ConductorRecord {
        field: FieldDesc { p, e },
        m,
        witt: coords.to_vec(),
        conductor,
        oracle_checked,
    };
    println!("{}", serde_json::to_string(&record).expect("record serializes"));
    Ok(0)
}

// ── graded-dims ─────────────────────────────────────────────────────────

pub fn cmd_graded_dims(
    p: u64,
    e: u8,
    m: u8,
    q: u8,
    from: i64,
    to: i64,
    prec: i64,
) -> Result<i32> {
    let cfg = RunConfig::new(p, e, m, q)?;
    if from < 0 {
        return Err(Error::parse("the graded range starts at n >= 0"));
    }
    let ctx = cfg.ctx()?;
    let q = cfg.q;
    let hi = (to.max(0) + 4 * (p as i64).pow(m as u32)).max(prec);

    println!("{:>4}  {:>3}  {:>6}  {:>10}", "n", "phi", "gr", "ttilde");
    let mut inconclusive = false;
    let mut prev_t: Option<u64> = None;
    if from > 0 {
        let t = t_space(&ctx, m, q, from - 1, prec)?;
        if t.stable {
            prev_t = Some(t.log_dim);
        } else {
            inconclusive = true;
        }
    }
    for n in from..=to {
        let phi = level_at(p, m, -n);
        let gr = graded_basis(&ctx, q, n, hi)?.log_dim();
        let t = t_space(&ctx, m, q, n, prec)?;
        let ttilde = match (t.stable, prev_t) {
            (true, Some(prev)) => Some(t.log_dim - prev),
            (true, None) if n == 0 => Some(t.log_dim),
            _ => None,
        };
        prev_t = t.stable.then_some(t.log_dim);
        let cell = match ttilde {
            Some(v) => v.to_string(),
            None => {
                inconclusive = true;
                "?".to_string()
            }
        };
        println!("{n:>4}  {phi:>3}  {gr:>6}  {cell:>10}");
    }
    Ok(if inconclusive { 3 } else { 0 })
}

// ── tspace-dim ──────────────────────────────────────────────────────────

#[derive(Serialize)]
struct TSpaceRecord {
    field: FieldDesc,
    m: u8,
    q: u8,
    n: i64,
    window_hi: i64,
    log_dim: u64,
    stable: bool,
}

pub fn cmd_tspace_dim(p: u64, e: u8, m: u8, q: u8, n: i64, prec: i64) -> Result<i32> {
    let cfg = RunConfig::new(p, e, m, q)?;
    let ctx = cfg.ctx()?;
    let t = t_space(&ctx, m, cfg.q, n, prec)?;
    let record = TSpaceRecord {
        field: FieldDesc { p, e },
        m,
        q,
        n,
        window_hi: t.hi,
        log_dim: t.log_dim,
        stable: t.stable,
    };
    println!("{}", serde_json::to_string(&record).expect("record serializes"));
    Ok(if t.stable { 0 } else { 3 })
}

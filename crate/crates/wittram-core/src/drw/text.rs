//! Round-trip text syntax for canonical forms.
//!
//! ```text
//! q=1 m=2 p=2 e=1 { n=-3: V^1[ [1] ], n=0: A[ [1,0] ]*dlogpi } + O(idx 12)
//! ```
//!
//! The header pins `(q, m, p, e)`; each entry names an index `n` and the
//! classical Witt coordinates of its coefficient `c_n ∈ W_{φ(n)}(F_q)`.
//! The template letter is redundant with the index — `A` for `V`-depth 0,
//! `V^s` for depth `s` — and the parser checks it, so every printed form
//! re-parses to the identical value and malformed depth claims are
//! rejected.  At `q = 1` the `A`-template carries a `*dlogpi` marker and
//! `V^s[…]` denotes the `dV^s(…)` component (`dV^s[…]` is accepted as an
//! input alias).  The `+ O(idx h)` tail carries the precision horizon and
//! is omitted for exact forms.

use super::{CanonicalForm, DrwCtx, IndexCase};
use crate::error::Error;
use crate::fq::FqElt;
use crate::Result;

impl DrwCtx {
    /// Print `f` in the canonical text syntax (see the module doc).
    pub fn form_to_text(&self, f: &CanonicalForm) -> String {
        let mut entries: Vec<String> = Vec::with_capacity(f.comps.len());
        for (&n, c) in &f.comps {
            let (s, _, r) = IndexCase::split(self.p(), f.m, n).siv(f.m);
            let coords: Vec<String> = self
                .ring(r)
                .to_witt_coords(c)
                .into_iter()
                .map(|d| self.field().format_elt(d))
                .collect();
            let coords = format!("[{}]", coords.join(","));
            let tmpl = if s == 0 {
                let marker = if f.q == 1 { "*dlogpi" } else { "" };
                format!("A[ {coords} ]{marker}")
            } else {
                format!("V^{s}[ {coords} ]")
            };
            entries.push(format!("n={n}: {tmpl}"));
        }
        let body = if entries.is_empty() {
            "{ }".to_string()
        } else {
            format!("{{ {} }}", entries.join(", "))
        };
        let tail = match f.hi {
            Some(h) => format!(" + O(idx {h})"),
            None => String::new(),
        };
        format!(
            "q={} m={} p={} e={} {}{}",
            f.q,
            f.m,
            self.p(),
            self.field().e(),
            body,
            tail
        )
    }

    /// Parse the canonical text syntax.  `p` and `e` must match this
    /// context, `m` must not exceed the context's ring supply, and every
    /// entry's template depth and coordinate count must agree with its
    /// index.  Repeated indices fuse additively; zero coefficients and
    /// entries at or beyond the horizon are dropped, as everywhere else.
    pub fn parse_form(&self, s: &str) -> Result<CanonicalForm> {
        let mut cur = Cursor::new(s);
        cur.skip_ws();
        cur.expect("q=")?;
        let q = cur.int()?;
        if !(0..=2).contains(&q) {
            return Err(Error::parse(format!("degree q={q} out of range 0..=2")));
        }
        let q = q as u8;
        cur.skip_ws();
        cur.expect("m=")?;
        let m = cur.int()?;
        if !(0..=self.m() as i64 + 1).contains(&m) {
            return Err(Error::parse(format!(
                "level m={m} outside this context's range 0..={}",
                self.m() + 1
            )));
        }
        let m = m as u8;
        cur.skip_ws();
        cur.expect("p=")?;
        let p = cur.int()?;
        cur.skip_ws();
        cur.expect("e=")?;
        let e = cur.int()?;
        if p != self.p() as i64 || e != self.field().e() as i64 {
            return Err(Error::parse(format!(
                "form is over p={p}, e={e} but this context has p={}, e={}",
                self.p(),
                self.field().e()
            )));
        }

        cur.skip_ws();
        cur.expect("{")?;
        let mut entries: Vec<(i64, crate::wring::WCoeff)> = Vec::new();
        let mut first = true;
        loop {
            cur.skip_ws();
            if cur.eat("}") {
                break;
            }
            if !first {
                cur.expect(",")?;
                cur.skip_ws();
            }
            first = false;
            cur.expect("n=")?;
            let n = cur.int()?;
            cur.skip_ws();
            cur.expect(":")?;
            cur.skip_ws();
            if q >= 2 {
                return Err(Error::parse("no nonzero components exist at q >= 2"));
            }
            if m == 0 {
                return Err(Error::parse("no nonzero components exist at level 0"));
            }

            let s_decl: u8 = if cur.eat("dV^") {
                if q != 1 {
                    return Err(Error::parse("dV^ template requires q=1"));
                }
                parse_depth(cur.int()?)?
            } else if cur.eat("V^") {
                parse_depth(cur.int()?)?
            } else {
                cur.expect("A")?;
                0
            };
            cur.skip_ws();
            cur.expect("[")?;
            cur.skip_ws();
            let group = cur.balanced_group()?;
            cur.skip_ws();
            cur.expect("]")?;
            if s_decl == 0 {
                cur.skip_ws();
                let has_marker = cur.eat("*");
                if has_marker {
                    cur.skip_ws();
                    cur.expect("dlogpi")?;
                }
                if (q == 1) != has_marker {
                    return Err(Error::parse(if q == 1 {
                        "A-component at q=1 must carry *dlogpi"
                    } else {
                        "*dlogpi marker is only valid at q=1"
                    }));
                }
            }

            let (s_case, _, r) = IndexCase::split(self.p(), m, n).siv(m);
            if s_case != s_decl {
                return Err(Error::parse(format!(
                    "index n={n} has V-depth {s_case} at m={m}, not {s_decl}"
                )));
            }
            let coords = split_top_level(group)?
                .into_iter()
                .map(|piece| self.field().parse_elt(piece))
                .collect::<Result<Vec<FqElt>>>()?;
            let c = self.ring(r).from_witt_coords(&coords)?;
            entries.push((n, c));
        }

        cur.skip_ws();
        let hi = if cur.eat("+") {
            cur.skip_ws();
            cur.expect("O(")?;
            cur.skip_ws();
            cur.expect("idx")?;
            cur.skip_ws();
            let h = cur.int()?;
            cur.skip_ws();
            cur.expect(")")?;
            Some(h)
        } else {
            None
        };
        cur.skip_ws();
        if !cur.at_end() {
            return Err(Error::parse(format!(
                "trailing input after form: `{}`",
                cur.rest()
            )));
        }

        let mut form = match hi {
            Some(h) => CanonicalForm::zero_to(q, m, h),
            None => CanonicalForm::zero(q, m),
        };
        for (n, c) in entries {
            self.insert_comp(&mut form, n, c);
        }
        Ok(form)
    }
}

fn parse_depth(s: i64) -> Result<u8> {
    if (1..=u8::MAX as i64).contains(&s) {
        Ok(s as u8)
    } else {
        Err(Error::parse(format!("V-depth {s} out of range")))
    }
}

/// Split the interior of a bracketed coordinate list on depth-0 commas,
/// so nested `[..]` literals (residue fields with `e > 1`) stay whole.
fn split_top_level(group: &str) -> Result<Vec<&str>> {
    let inner = group
        .strip_prefix('[')
        .and_then(|g| g.strip_suffix(']'))
        .ok_or_else(|| Error::parse(format!("malformed coordinate list: `{group}`")))?;
    let mut pieces = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (pos, ch) in inner.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::parse("unbalanced brackets in coordinate list"))?;
            }
            ',' if depth == 0 => {
                pieces.push(inner[start..pos].trim());
                start = pos + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::parse("unbalanced brackets in coordinate list"));
    }
    let last = inner[start..].trim();
    if !last.is_empty() {
        pieces.push(last);
    }
    Ok(pieces)
}

/// Minimal scanning cursor for the form grammar.
struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { s, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos == self.s.len()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.s.len() - trimmed.len();
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(Error::parse(format!(
                "expected `{lit}` at `{}`",
                truncate_for_msg(self.rest())
            )))
        }
    }

    fn int(&mut self) -> Result<i64> {
        let rest = self.rest();
        let mut len = 0usize;
        let bytes = rest.as_bytes();
        if len < bytes.len() && (bytes[len] == b'+' || bytes[len] == b'-') {
            len += 1;
        }
        while len < bytes.len() && bytes[len].is_ascii_digit() {
            len += 1;
        }
        let tok = &rest[..len];
        let v: i64 = tok.parse().map_err(|_| {
            Error::parse(format!(
                "expected an integer at `{}`",
                truncate_for_msg(rest)
            ))
        })?;
        self.pos += len;
        Ok(v)
    }

    /// Consume one balanced `[...]` group (the coordinate list), returning
    /// it whole, brackets included.
    fn balanced_group(&mut self) -> Result<&'a str> {
        let rest = self.rest();
        if !rest.starts_with('[') {
            return Err(Error::parse(format!(
                "expected `[` at `{}`",
                truncate_for_msg(rest)
            )));
        }
        let mut depth = 0usize;
        for (pos, ch) in rest.char_indices() {
            match ch {
                '[' => depth += 1,
                ']' => {
                    depth -= 1;
                    if depth == 0 {
                        let group = &rest[..=pos];
                        self.pos += pos + 1;
                        return Ok(group);
                    }
                }
                _ => {}
            }
        }
        Err(Error::parse("unterminated coordinate list"))
    }
}

fn truncate_for_msg(s: &str) -> &str {
    let end = s
        .char_indices()
        .take(24)
        .last()
        .map_or(0, |(i, c)| i + c.len_utf8());
    &s[..end]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::FqField;
    use crate::sample;

    fn ctx(p: u64, e: u8, m: u8) -> DrwCtx {
        DrwCtx::new(FqField::new(p, e).unwrap(), m).unwrap()
    }

    #[test]
    fn documented_example_round_trips_byte_exact() {
        let c = ctx(2, 1, 2);
        let s = "q=1 m=2 p=2 e=1 { n=-3: V^1[ [1] ], n=0: A[ [1,0] ]*dlogpi } + O(idx 12)";
        let f = c.parse_form(s).unwrap();
        assert_eq!(f.q, 1);
        assert_eq!(f.m, 2);
        assert_eq!(f.comps.len(), 2);
        assert_eq!(f.hi, Some(12));
        assert_eq!(c.form_to_text(&f), s);
        assert_eq!(c.parse_form(&c.form_to_text(&f)).unwrap(), f);
    }

    #[test]
    fn zero_forms_and_horizons_print_and_parse() {
        let c = ctx(3, 1, 2);
        let z = CanonicalForm::zero(0, 2);
        assert_eq!(c.form_to_text(&z), "q=0 m=2 p=3 e=1 { }");
        assert_eq!(c.parse_form("q=0 m=2 p=3 e=1 { }").unwrap(), z);

        let zt = CanonicalForm::zero_to(1, 1, -4);
        let s = c.form_to_text(&zt);
        assert_eq!(s, "q=1 m=1 p=3 e=1 { } + O(idx -4)");
        assert_eq!(c.parse_form(&s).unwrap(), zt);

        // level-0 and q=2 zero forms (operator outputs) survive the trip
        for z in [CanonicalForm::zero(0, 0), CanonicalForm::zero(2, 2)] {
            assert_eq!(c.parse_form(&c.form_to_text(&z)).unwrap(), z);
        }
    }

    #[test]
    fn random_forms_round_trip_bit_exact() {
        for (p, e, m) in [(2u64, 1u8, 3u8), (3, 1, 2), (2, 2, 2), (3, 2, 1)] {
            let c = ctx(p, e, m);
            let mut rng = sample::rng(0x7e57_0001 + p + 10 * e as u64 + 100 * m as u64);
            for q in [0u8, 1] {
                for _ in 0..25 {
                    let mut f = sample::random_canonical_form(&c, &mut rng, q, -9, 9, 5);
                    let s = c.form_to_text(&f);
                    assert_eq!(c.parse_form(&s).unwrap(), f, "exact trip failed on `{s}`");

                    f.hi = Some(f.support_max().unwrap_or(0) + 2);
                    let s = c.form_to_text(&f);
                    assert_eq!(c.parse_form(&s).unwrap(), f, "horizon trip failed on `{s}`");
                }
            }
        }
    }

    #[test]
    fn tolerant_inputs_normalize() {
        let c = ctx(2, 1, 2);
        // dV alias, loose whitespace, fused duplicate index
        let f = c
            .parse_form("q=1 m=2 p=2 e=1 {n=-3:dV^1[[1]],n=0:A[[1,1]] * dlogpi,n=0:A[[0,1]]*dlogpi}")
            .unwrap();
        assert_eq!(
            c.form_to_text(&f),
            "q=1 m=2 p=2 e=1 { n=-3: V^1[ [1] ], n=0: A[ [1,0] ]*dlogpi }"
        );
    }

    #[test]
    fn malformed_forms_are_rejected() {
        let c = ctx(2, 1, 2);
        for bad in [
            // wrong depth claim for the index
            "q=0 m=2 p=2 e=1 { n=-3: A[ [1,0] ] }",
            "q=0 m=2 p=2 e=1 { n=2: V^1[ [1] ] }",
            // wrong coordinate count for the level
            "q=0 m=2 p=2 e=1 { n=2: A[ [1] ] }",
            // dlogpi marker misuse in both directions
            "q=0 m=2 p=2 e=1 { n=2: A[ [1,0] ]*dlogpi }",
            "q=1 m=2 p=2 e=1 { n=2: A[ [1,0] ] }",
            "q=0 m=2 p=2 e=1 { n=-3: dV^1[ [1] ] }",
            // field/level/degree headers out of range
            "q=0 m=2 p=3 e=1 { }",
            "q=0 m=2 p=2 e=2 { }",
            "q=0 m=9 p=2 e=1 { }",
            "q=3 m=2 p=2 e=1 { }",
            // components where none can live
            "q=2 m=2 p=2 e=1 { n=0: A[ [1,0] ] }",
            // structural damage
            "q=0 m=2 p=2 e=1 { n=2: A[ [1,0] ] } trailing",
            "q=0 m=2 p=2 e=1 { n=2: A[ [1,0 ] }",
            "q=0 m=2 p=2 e=1 { n=2 A[ [1,0] ] }",
        ] {
            assert!(c.parse_form(bad).is_err(), "accepted `{bad}`");
        }
    }
}

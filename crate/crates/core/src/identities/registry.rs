//! The hand-written registry.
//!
//! Conventions: `s = √q`, and a rooted symbol `x` is read through `rx`.
//! Inside series multipliers `n` is the summation index and `N` the
//! structural one.

use std::sync::Arc;

use crate::error::Result;
use crate::expr::{Expr, ParseCtx, SeriesVar};
use crate::hyper::SeriesBuilder;
use crate::pairs::{pair_by_id, WPBaileyPair};
use crate::point::SymbolDecl;

use super::{Backend, Expectation, Identity, NRole};

fn ex(src: &str, holes: Vec<(&str, Expr)>) -> Expr {
    let mut ctx = ParseCtx::new();
    for (name, e) in holes {
        ctx = ctx.hole(name, e);
    }
    ctx.parse(src).unwrap_or_else(|e| panic!("registry expression `{src}`: {e}"))
}

fn built(b: SeriesBuilder<'_>) -> Expr {
    b.expr().unwrap_or_else(|e| panic!("registry series: {e}"))
}

/// `q` (rooted) first, then the given symbols.
fn decls(rooted: &[&str], plain: &[&str]) -> Vec<SymbolDecl> {
    let mut out = vec![SymbolDecl::rooted("q")];
    out.extend(rooted.iter().map(|n| SymbolDecl::rooted(n)));
    out.extend(plain.iter().map(|n| SymbolDecl::plain(n)));
    out
}

fn finite(id: &str, anchor: &str, summary: &str, decls: Vec<SymbolDecl>, lhs: Expr, rhs: Expr) -> Identity {
    Identity {
        id: id.to_string(),
        anchor: anchor.to_string(),
        summary: summary.to_string(),
        lhs,
        rhs,
        decls,
        bindings: Vec::new(),
        n_role: NRole::Structural,
        backends: vec![Backend::Exact],
        default_backend: Backend::Exact,
        expectation: Expectation::Holds,
        series_var: SeriesVar::Q,
        pair: None,
    }
}

fn infinite(id: &str, anchor: &str, summary: &str, decls: Vec<SymbolDecl>, lhs: Expr, rhs: Expr) -> Identity {
    Identity {
        n_role: NRole::Absent,
        backends: vec![Backend::Interval],
        default_backend: Backend::Interval,
        ..finite(id, anchor, summary, decls, lhs, rhs)
    }
}

fn power_series(id: &str, anchor: &str, summary: &str, decls: Vec<SymbolDecl>, lhs: Expr, rhs: Expr) -> Identity {
    Identity {
        backends: vec![Backend::Series, Backend::Interval],
        default_backend: Backend::Series,
        series_var: SeriesVar::HalfQ,
        ..infinite(id, anchor, summary, decls, lhs, rhs)
    }
}

impl Identity {
    fn misprint(mut self, note: &str) -> Self {
        self.expectation = Expectation::Misprint(note.to_string());
        self
    }

    /// Restricts `|coordinate|` of the named symbols.
    fn ranges(mut self, r: &[(&str, (i64, i64), (i64, i64))]) -> Self {
        for (name, lo, hi) in r {
            let d = self.decls.iter_mut().find(|d| d.name == *name).expect("ranged symbol is declared");
            *d = d.clone().within(*lo, *hi);
        }
        self
    }

    fn renamed(mut self, id: &str) -> Self {
        self.id = id.to_string();
        self
    }
}

fn catalog_pair(id: &str) -> Arc<WPBaileyPair> {
    pair_by_id(id).unwrap_or_else(|| panic!("catalog pair `{id}`"))
}

/// Terminating very-well-poised series
/// `_{r+1}W_r(a1; rs; base, arg)`, with `ra1 = √a1`.
fn wseries<'c>(ctx: &'c ParseCtx, label: &str, a1: &str, ra1: &str, rs: &[&str], base: &str, arg: &str) -> SeriesBuilder<'c> {
    let num = format!("{a1}, ({base})*({ra1}), -({base})*({ra1}), {}", rs.join(", "));
    let den: Vec<String> = [ra1.to_string(), format!("-({ra1})")]
        .into_iter()
        .chain(rs.iter().map(|r| format!("({a1})*({base})/({r})")))
        .collect();
    SeriesBuilder::new(ctx, label).base(base).num(&num).den(&den.join(", ")).phi().arg(arg).upper("N")
}

// ---------------------------------------------------------------------------
// Transformations driven by a WP-Bailey pair
// ---------------------------------------------------------------------------

const THM1_NUM: &str = "y, z, k*a*q^(N+1)/(y*z), q^(-N)";

fn pair_ctx(pair: &Arc<WPBaileyPair>) -> ParseCtx {
    ParseCtx::new().with_pair(pair.clone())
}

/// Finite transformation with free `ρ1 = y`, `ρ2 = z`, for any pair.
pub fn thm1_a(pair: &Arc<WPBaileyPair>) -> Result<Identity> {
    let ctx = pair_ctx(pair);
    let lhs = SeriesBuilder::new(&ctx, "lhs")
        .num(THM1_NUM)
        .den("k*q/y, k*q/z, y*z*q^(-N)/a, k*q^(1+N)")
        .arg("q")
        .mult("(1 - k*q^(2*n))/(1 - k)*beta(n)")
        .upper("N")
        .expr()?;
    let sum = SeriesBuilder::new(&ctx, "rhs")
        .num(THM1_NUM)
        .den("a*q/y, a*q/z, a*q^(1+N), y*z*q^(-N)/k")
        .arg("a*q/k")
        .mult("alpha(n)")
        .upper("N")
        .expr()?;
    let rhs = ParseCtx::new()
        .hole("S", sum)
        .parse("[k*q, k*q/(y*z), a*q/y, a*q/z; q]_N/[k*q/y, k*q/z, a*q/(y*z), a*q; q]_N*$S")?;
    finite(
        &format!("thm1_a[{}]", pair.id),
        "reformulate the constructions at",
        "finite transformation with free parameters y, z for a plugged-in pair",
        decls(&[], &["y", "z"]),
        lhs,
        rhs,
    )
    .plug(pair)
}

/// Second finite transformation (no free parameters), for any pair.
pub fn thm1_b(pair: &Arc<WPBaileyPair>) -> Result<Identity> {
    let ctx = pair_ctx(pair);
    let lhs = SeriesBuilder::new(&ctx, "lhs").num("q^(-N)").den("q^(-N)*k^2/a^2").arg("q").mult("beta(n)").upper("N").expr()?;
    let sum = SeriesBuilder::new(&ctx, "rhs")
        .num("q^(N+1)*a^2/k, q^(-N)")
        .num_with("k", "q", 2)
        .den("a*q^(1+N), q^(-N)*k/a")
        .den_with("q*a^2/k", "q", 2)
        .arg("a*q/k")
        .mult("alpha(n)")
        .upper("N")
        .expr()?;
    let rhs = ParseCtx::new().hole("S", sum).parse("[q*a/k, q*a^2/k; q]_N/[q*a, q*a^2/k^2; q]_N*$S")?;
    finite(
        &format!("thm1_b[{}]", pair.id),
        "reformulate the constructions at",
        "finite transformation with k^2/a^2 denominator for a plugged-in pair",
        decls(&[], &[]),
        lhs,
        rhs,
    )
    .plug(pair)
}

/// `N → ∞` form of [`thm1_a`].
pub fn cor_inf_a(pair: &Arc<WPBaileyPair>) -> Result<Identity> {
    let ctx = pair_ctx(pair);
    let lhs = SeriesBuilder::new(&ctx, "lhs")
        .num("y, z")
        .den("k*q/y, k*q/z")
        .arg("a*q/(y*z)")
        .mult("(1 - k*q^(2*n))/(1 - k)*beta(n)")
        .expr()?;
    let sum = SeriesBuilder::new(&ctx, "rhs").num("y, z").den("a*q/y, a*q/z").arg("a*q/(y*z)").mult("alpha(n)").expr()?;
    let rhs = ParseCtx::new()
        .hole("S", sum)
        .parse("[k*q, k*q/(y*z), a*q/y, a*q/z; q]_inf/[k*q/y, k*q/z, a*q/(y*z), a*q; q]_inf*$S")?;
    infinite(
        &format!("cor_inf_a[{}]", pair.id),
        "immediate upon letting",
        "nonterminating transformation with free y, z for a plugged-in pair",
        decls(&[], &["y", "z"]),
        lhs,
        rhs,
    )
    .plug(pair)
}

/// `N → ∞` form of [`thm1_b`].
pub fn cor_inf_b(pair: &Arc<WPBaileyPair>) -> Result<Identity> {
    let ctx = pair_ctx(pair);
    let lhs = SeriesBuilder::new(&ctx, "lhs").arg("q*a^2/k^2").mult("beta(n)").expr()?;
    let sum = SeriesBuilder::new(&ctx, "rhs")
        .num_with("k", "q", 2)
        .den_with("q*a^2/k", "q", 2)
        .arg("q*a^2/k^2")
        .mult("alpha(n)")
        .expr()?;
    let rhs = ParseCtx::new().hole("S", sum).parse("[q*a/k, q*a^2/k; q]_inf/[q*a, q*a^2/k^2; q]_inf*$S")?;
    infinite(
        &format!("cor_inf_b[{}]", pair.id),
        "immediate upon letting",
        "nonterminating transformation in powers of qa^2/k^2 for a plugged-in pair",
        decls(&[], &[]),
        lhs,
        rhs,
    )
    .plug(pair)
}

/// Warnaar's third chain as a relation between `α(a, m)` and `β(a, m)`,
/// with `m = k`.
pub fn war3_master(pair: &Arc<WPBaileyPair>) -> Result<Identity> {
    let ctx = pair_ctx(pair);
    let lhs = ctx.parse(
        "sum(n, 0, N, (1 + a*q^(2*n))/(1 + a)*[k/a; q^2]_(N-n)*[a*k; q^2]_(N+n)\
         /([q^2; q^2]_(N-n)*[a^2*q^2; q^2]_(N+n))*q^(-n)*alpha(n))",
    )?;
    let rhs = ctx.parse(
        "q^(-N)*[-k*q; q]_(2*N)/[-a; q]_(2*N)*sum(n, 0, N, (1 - k*q^(2*n))/(1 - k)\
         *[a/k; q^2]_(N-n)*[a*k; q^2]_(N+n)/([q^2; q^2]_(N-n)*[k^2*q^2; q^2]_(N+n))*(k/a)^(N-n)*beta(n))",
    )?;
    finite(
        &format!("war3_master[{}]", pair.id),
        "the third chain of Warnaar",
        "third-chain relation between alpha(a,m) and beta(a,m) with m = k",
        decls(&[], &[]),
        lhs,
        rhs,
    )
    .plug(pair)
}

// ---------------------------------------------------------------------------
// Simple pairs: β_n = Σ_{j ≤ n} α_j, a = k/q
// ---------------------------------------------------------------------------

const W6_NUM: &str = "q*rk, -q*rk, y, z, k^2*q^N/(y*z), q^(-N)";
const W6_DEN: &str = "rk, -rk, q*k/y, q*k/z, y*z*q^(1-N)/k, k*q^(1+N)";
const R4_NUM: &str = "y, z, k^2*q^N/(y*z), q^(-N)";
const R4_DEN: &str = "k/y, k/z, k*q^N, y*z*q^(-N)/k";
const RATIO: &str = "(1 - k/y)*(1 - k/z)*(1 - k*q^N)*(1 - k*q^N/(y*z))\
                     /((1 - k)*(1 - k/(y*z))*(1 - k*q^N/y)*(1 - k*q^N/z))";

fn simple_lhs<'c>(ctx: &'c ParseCtx, label: &str) -> SeriesBuilder<'c> {
    SeriesBuilder::new(ctx, label).num(W6_NUM).den(W6_DEN).upper("N")
}

fn simple_rhs<'c>(ctx: &'c ParseCtx, label: &str) -> SeriesBuilder<'c> {
    SeriesBuilder::new(ctx, label).num(R4_NUM).den(R4_DEN).upper("N")
}

fn with_ratio(sum: Expr) -> Expr {
    ex(&format!("{RATIO}*$S"), vec![("S", sum)])
}

fn simple_decls(extra: &[&str]) -> Vec<SymbolDecl> {
    let mut plain = vec!["y", "z"];
    plain.extend_from_slice(extra);
    decls(&["k"], &plain)
}

/// `q^{(mn²+(p+2)n)/2}` corollary for given integers `m > 0`, `p`.
pub fn theta_sum(m: i64, p: i64) -> Identity {
    let ctx = ParseCtx::new();
    let den = format!("-s^({})", m + p);
    let base = format!("q^{m}");
    let lhs = built(
        simple_lhs(&ctx, "lhs")
            .den_with(&den, &base, 1)
            .mult(&format!("s^({m}*n^2 + {}*n)", p + 2)),
    );
    let inner = built(
        simple_rhs(&ctx, "rhs")
            .den_with(&den, &base, 1)
            .mult(&format!("s^({m}*n^2 + {}*n)", p - 2 * m))
            .lower(1),
    );
    let rhs = with_ratio(ex(&format!("1 - s^({})*$T", m - p), vec![("T", inner)]));
    finite(
        "theta_sum",
        "set α0=1 and, for n>0",
        &format!("simple-pair corollary with q^((mn^2+(p+2)n)/2), m = {m}, p = {p}"),
        simple_decls(&[]),
        lhs,
        rhs,
    )
}

/// Subbarao–Verma instance collapsed to `P = Q = p = R = q^{m/2}`.
pub fn sv_special_q(m: i64) -> Identity {
    let ctx = ParseCtx::new();
    let qm = format!("q^{m}");
    let sub = |s: &str| s.replace('Q', &format!("({qm})"));
    let lhs = built(
        simple_lhs(&ctx, "lhs")
            .num_with(&sub("a*Q, b*Q, c*Q, a*Q/(b*c)"), &qm, 1)
            .den_with(&sub("a*Q/c, a*Q/b, b*c*Q, Q"), &qm, 1)
            .arg("q"),
    );
    let sum = built(
        simple_rhs(&ctx, "rhs")
            .num_with(&sub("Q*ra, -Q*ra, a, b, c, a/(b*c)"), &qm, 1)
            .den_with(&sub("ra, -ra, a*Q/c, a*Q/b, b*c*Q, Q"), &qm, 1)
            .arg(&qm),
    );
    finite(
        "sv_special_q",
        "identity of Subbarao and Verma",
        &format!("Subbarao-Verma instance at P = Q = p = R = q^(m/2), m = {m}"),
        decls(&["k", "a"], &["y", "z", "b", "c"]),
        lhs,
        with_ratio(sum),
    )
}

fn simple_family() -> Vec<Identity> {
    let ctx = ParseCtx::new();
    let mut out = Vec::new();

    let lhs = built(simple_lhs(&ctx, "lhs").arg("q").mult("sum(j, 0, n, u^j)"));
    let rhs = with_ratio(built(simple_rhs(&ctx, "rhs").mult("u^n")));
    out.push(finite(
        "simple_master",
        "Let ρ1 = y, ρ2=z and a=k/q",
        "simple-pair transformation, alpha_n = u^n",
        simple_decls(&["u"]),
        lhs,
        rhs,
    ));

    // even-index terms only: (x; q)_{2n}
    let even = SeriesBuilder::new(&ctx, "lhs")
        .num_with(W6_NUM, "q", 2)
        .den_with(W6_DEN, "q", 2)
        .arg("q^2")
        .upper("floor(N/2)");
    out.push(finite(
        "alt_sum",
        "Let αn=(−1)^n in Corollary",
        "12-phi-11 in base q^2 against a 5-phi-4, alpha_n = (-1)^n",
        simple_decls(&[]),
        built(even),
        with_ratio(built(simple_rhs(&ctx, "rhs").mult("(-1)^n"))),
    ));

    let lhs = built(
        SeriesBuilder::new(&ctx, "lhs")
            .num_with("y, -ry*q^(N+1), q^(-N)", "q", 2)
            .den_with("q^2, -ry*q^(1-N), y*q^(2+N)", "q", 2)
            .arg("q^2")
            .mult("(1 - y*q^(4*n+1))/(1 - y*q)")
            .upper("floor(N/2)"),
    );
    let rhs = ex(
        "(1 - q)*(1 + ry)/((1 - q^(N+1))*(1 + ry*q^N))*[y*q^2, -q; q]_N/[q*ry, -1/ry; q]_N*ry^(-N)",
        vec![],
    );
    out.push(finite(
        "alt_sum_qdixon",
        "Let αn=(−1)^n in Corollary",
        "q-Dixon evaluation of the alternating sum at k = qy, z = -q sqrt(y)",
        decls(&["y"], &[]),
        lhs,
        rhs,
    ));

    out.push(finite(
        "count_sum",
        "Let αn=1 in Corollary",
        "simple-pair corollary with (n+1)q^n",
        simple_decls(&[]),
        built(simple_lhs(&ctx, "lhs").arg("q").mult("n + 1")),
        with_ratio(built(simple_rhs(&ctx, "rhs"))),
    ));

    for (id, anchor, d, arg, what) in [
        ("tele_a", "easily seen to telescope", "(a+b-1)*q", "q^2", "(a+b-1)q"),
        ("tele_b", "The  result follows as above", "a*b*q", "q", "abq"),
    ] {
        let lhs = built(simple_lhs(&ctx, "lhs").num("a*q, b*q").den(&format!("{d}, q")).arg("q"));
        let rhs = with_ratio(built(simple_rhs(&ctx, "rhs").num("a, b").den(&format!("{d}, q")).arg(arg)));
        out.push(finite(
            id,
            anchor,
            &format!("8-phi-7 against 6-phi-5 with denominator parameter {what}"),
            simple_decls(&["a", "b"]),
            lhs,
            rhs,
        ));
    }

    out.push(theta_sum(2, 1));

    // Subbarao–Verma: α_n is the n-th summand, β_n the closed sum
    fn d_num(b: SeriesBuilder<'_>) -> SeriesBuilder<'_> {
        b.den_with("P*Q*R/p", "P*Q*R/p", 1)
            .den_with("a*p*P*Q/(c*R)", "p*P*Q/R", 1)
            .den_with("a*p*Q*R/(b*P)", "p*Q*R/P", 1)
            .den_with("b*c*p*P*R/Q", "p*P*R/Q", 1)
    }
    let lhs = built(
        d_num(simple_lhs(&ctx, "lhs"))
            .num_with("a*p^2", "p^2", 1)
            .num_with("b*P^2", "P^2", 1)
            .num_with("c*R^2", "R^2", 1)
            .num_with("a*Q^2/(b*c)", "Q^2", 1)
            .arg("q"),
    );
    let rhs = with_ratio(built(
        d_num(simple_rhs(&ctx, "rhs"))
            .num_with("a", "p^2", 1)
            .num_with("b", "P^2", 1)
            .num_with("c", "R^2", 1)
            .num_with("a/(b*c)", "Q^2", 1)
            .arg("R^2")
            .mult(
                "(1 - a*(p*P*Q*R)^n)*(1 - b*(p*P/(Q*R))^n)*(1 - (P*Q/(p*R))^n/c)*(1 - a/(b*c)*(p*Q/(P*R))^n)\
                 /((1 - a)*(1 - b)*(1 - 1/c)*(1 - a/(b*c)))",
            ),
    ));
    out.push(finite(
        "sv_special",
        "identity of Subbarao and Verma",
        "simple pair from the Subbarao-Verma sum with independent bases p, P, Q, R",
        simple_decls(&["a", "b", "c", "p", "P", "Q", "R"]),
        lhs,
        rhs,
    ));

    out.push(sv_special_q(2));

    // m = aq in the third chain, α_j = u^j
    let lhs = ex(
        "sum(n, 0, N, (1 + a*q^(2*n))/(1 + a)*[q; q^2]_(N-n)*[a^2*q; q^2]_(N+n)\
         /([q^2; q^2]_(N-n)*[a^2*q^2; q^2]_(N+n))*q^(-n)*u^n)",
        vec![],
    );
    let rhs = ex(
        "(1 + a*q^(2*N))*(1 + a*q^(2*N+1))/((1 + a)*(1 + a*q))*sum(n, 0, N, (1 - a*q^(2*n+1))/(1 - a*q)\
         *[1/q; q^2]_(N-n)*[a^2*q; q^2]_(N+n)/([q^2; q^2]_(N-n)*[a^2*q^4; q^2]_(N+n))*q^(-n)*sum(j, 0, n, u^j))",
        vec![],
    );
    out.push(finite(
        "war3_aq",
        "Upon setting m = a q",
        "third chain at m = aq for beta_n = sum of alpha_j, free a, alpha_j = u^j",
        decls(&[], &["a", "u"]),
        lhs,
        rhs,
    ));
    out
}

// ---------------------------------------------------------------------------
// New pairs inserted into the chains
// ---------------------------------------------------------------------------

fn mz03_in_c1(zq: &str) -> (Expr, Expr) {
    let ctx = ParseCtx::new();
    let w1 = built(wseries(
        &ctx,
        "W1",
        "q",
        "s",
        &["y", "y*q", "z", "z*q", "q^2/(a*d)", "d*q/a", "q^2", "a*q^(N+2)/(y*z)", "a*q^(N+3)/(y*z)", "q^(-N)", "q^(1-N)"],
        "q^2",
        "q^2",
    ));
    let w2 = built(wseries(
        &ctx,
        "W2",
        "q^3",
        "s^3",
        &["y*q", "y*q^2", "z*q", zq, "q^3/(a*d)", "d*q^2/a", "q^2", "a*q^(N+3)/(y*z)", "a*q^(N+4)/(y*z)", "q^(1-N)", "q^(2-N)"],
        "q^2",
        "q^2",
    ));
    let fac = ex(
        "a*q*(1 - d/a)*(1 - q/(a*d))*(1 - q^3)*(1 - q^(-N))*(1 - y)*(1 - a*q^(2+N)/(y*z))*(1 - z)\
         /((1 - a*d)*(1 - q)*(1 - a*q/d)*(1 - q^(2+N))*(1 - q^2/y)*(1 - q^2/z)*(1 - y*z*q^(-N)/a))",
        vec![],
    );
    let lhs = ex("$W1 - $F*$W2", vec![("W1", w1), ("W2", w2), ("F", fac)]);
    let w3 = built(wseries(&ctx, "W3", "a", "ra", &["y", "z", "d", "q/d", "-a", "a*q^(N+2)/(y*z)", "q^(-N)"], "q", "-a"));
    let rhs = ex(
        "[q^2, q^2/(y*z), a*q/y, a*q/z; q]_N/[q^2/y, q^2/z, a*q/(y*z), a*q; q]_N*$W3",
        vec![("W3", w3)],
    );
    (lhs, rhs)
}

fn mz03_lim(x: &str) -> (Expr, Expr) {
    let ctx = ParseCtx::new();
    let l1 = built(
        SeriesBuilder::new(&ctx, "L1")
            .base("q^2")
            .num("s^5, -s^5, y, q/y, q^2/(a*d), d*q/a, q^2")
            .den("s, -s, q^2*y, q^3/y, q*a*d, q^2*a/d")
            .phi()
            .arg("a^2"),
    );
    let l2 = built(
        SeriesBuilder::new(&ctx, "L2")
            .base("q^2")
            .num("s^7, -s^7, y*q, q^2/y, q^3/(a*d), d*q^2/a, q^2")
            .den("s^3, -s^3, q^3*y, q^4/y, q^2*a*d, q^3*a/d")
            .phi()
            .arg("a^2"),
    );
    let fac = ex(
        "a^2*(1 - d/a)*(1 - q/(a*d))*(1 - q^3)*(1 - q/y)*(1 - y)/((1 - a*d)*(1 - q)*(1 - a*q/d)*(1 - q^2/y)*(1 - q*y))",
        vec![],
    );
    let lhs = ex("$L1 - $F*$L2", vec![("L1", l1), ("L2", l2), ("F", fac)]);
    let rhs = ex(
        &format!("[q, q^2; q]_inf*[a*d*y, a*d*q/y, a*y*q/d, q^2*a/(d*y); q^2]_inf/[{x}, a*q/d, y*q, q^2/y; q]_inf"),
        vec![],
    );
    (lhs, rhs)
}

fn war3_mz01(third: &str) -> (Expr, Expr) {
    let ctx = ParseCtx::new();
    let lhs = built(wseries(
        &ctx,
        "lhs",
        "k",
        "rk",
        &["q*a/k", "k/ra", "-k/ra", "k*s/ra", "-k*s/ra", "ra*rk*q^N", "-ra*rk*q^N", "-q^(-N)", "q^(-N)"],
        "q",
        "q^2",
    ));
    let sum = built(
        SeriesBuilder::new(&ctx, "rhs")
            .num(&format!("i*q*ra, -i*q*ra, {third}, ra*rk*q^N, -ra*rk*q^N, -q^(-N), q^(-N)"))
            .den("i*ra, -i*ra, a*q^(1+N), -a*q^(1+N), ra/rk*q^(1-N), -ra/rk*q^(1-N)")
            .phi()
            .arg("q")
            .upper("N"),
    );
    let rhs = ex(
        "[k/a, k^2*q^2, -a, -a*q; q^2]_N/[a/k, a^2*q^2, -k*q, -k*q^2; q^2]_N*(a*q/k)^N*$S",
        vec![("S", sum)],
    );
    (lhs, rhs)
}

fn new_pair_family() -> Vec<Identity> {
    let ctx = ParseCtx::new();
    let mut out = Vec::new();

    let lhs = built(
        SeriesBuilder::new(&ctx, "lhs")
            .num("k, q*rk, -q*rk, y, z, q*a/k, k/ra, -k/ra, k*s/ra, -k*s/ra, k*a*q^(N+1)/(y*z), q^(-N)")
            .den("rk, -rk, q*k/y, q*k/z, k^2/a, ra*s, -ra*s, q*ra, -q*ra, k*q^(N+1), y*z*q^(-N)/a")
            .phi()
            .arg("q")
            .upper("N"),
    );
    let sum = built(
        SeriesBuilder::new(&ctx, "rhs")
            .num("y, z, q*a^2/k^2, k*a*q^(N+1)/(y*z), q^(-N)")
            .den("q*a/y, q*a/z, a*q^(N+1), y*z*q^(-N)/k")
            .phi()
            .arg("q")
            .upper("N"),
    );
    let rhs = ex(
        "[k*q, k*q/(y*z), a*q/y, a*q/z; q]_N/[k*q/y, k*q/z, a*q/(y*z), a*q; q]_N*$S",
        vec![("S", sum)],
    );
    out.push(finite(
        "mz01_in_c1",
        "Insert the WP-Bailey pair at",
        "12-phi-11 against 5-phi-4 from the pair mz01",
        decls(&["a", "k"], &["y", "z"]),
        lhs,
        rhs,
    ));

    let lhs = built(
        SeriesBuilder::new(&ctx, "lhs")
            .num("k, q*a/k, k/ra, -k/ra, k*s/ra, -k*s/ra, q^(-N)")
            .den("k^2/a, ra*s, -ra*s, q*ra, -q*ra, k^2*q^(-N)/a^2")
            .phi()
            .arg("q")
            .upper("N"),
    );
    let sum = built(
        SeriesBuilder::new(&ctx, "rhs")
            .num("q*a^2/k^2, rk, -rk, rk*s, -rk*s, a^2*q^(N+1)/k, q^(-N)")
            .den("a*s/rk, -a*s/rk, a*q/rk, -a*q/rk, k*q^(-N)/a, a*q^(N+1)")
            .phi()
            .arg("q")
            .upper("N"),
    );
    let rhs = ex("[q*a/k, q*a^2/k; q]_N/[q*a, q*a^2/k^2; q]_N*$S", vec![("S", sum)]);
    out.push(finite(
        "mz01_in_c2",
        "Substituting the pair at",
        "7-phi-6 against 7-phi-6 from the pair mz01",
        decls(&["a", "k"], &[]),
        lhs,
        rhs,
    ));

    let c1_decls = decls(&["a"], &["y", "z", "d"]);
    let (lhs, rhs) = mz03_in_c1("z*q^2");
    out.push(finite(
        "mz03_in_c1",
        "replace $k$ with $q$",
        "two 14-W-13 against a 10-W-9 from the pair mz03 (second series read with zq^2)",
        c1_decls.clone(),
        lhs,
        rhs,
    ));
    let (lhs, rhs) = mz03_in_c1("z*q^3");
    out.push(
        finite(
            "mz03_in_c1_verbatim",
            "replace $k$ with $q$",
            "two 14-W-13 against a 10-W-9, second series with zq^3 as displayed",
            c1_decls,
            lhs,
            rhs,
        )
        .misprint("second series lists zq, zq^3; only zq, zq^2 verifies"),
    );

    let lim_ranges: &[(&str, (i64, i64), (i64, i64))] = &[("a", (1, 10), (7, 10)), ("y", (1, 1), (3, 1)), ("d", (1, 2), (2, 1))];
    let (lhs, rhs) = mz03_lim("a*b");
    out.push(
        infinite(
            "mz03_in_c1_lim",
            "set $z=q/y$, let $N \\to \\infty$",
            "z = q/y, N -> infinity product form, product side read with (ab; q) as displayed",
            decls(&[], &["a", "y", "d", "b"]),
            lhs,
            rhs,
        )
        .ranges(lim_ranges)
        .misprint("no b occurs on the left; the (ad; q) reading is registered separately"),
    );
    let (lhs, rhs) = mz03_lim("a*d");
    out.push(
        infinite(
            "mz03_in_c1_lim_alt",
            "set $z=q/y$, let $N \\to \\infty$",
            "z = q/y, N -> infinity product form, product side read with (ad; q)",
            decls(&[], &["a", "y", "d"]),
            lhs,
            rhs,
        )
        .ranges(lim_ranges),
    );

    let l1 = built(
        SeriesBuilder::new(&ctx, "L1")
            .base("q^2")
            .num("q^2/(a*d), d*q/a, q^(-N), q^(1-N), q^2")
            .den("a*q^2/d, a*d*q, q^(2-N)/a^2, q^(3-N)/a^2")
            .phi()
            .arg("q^2")
            .upper("N"),
    );
    let l2 = built(
        SeriesBuilder::new(&ctx, "L2")
            .base("q^2")
            .num("q^3/(a*d), d*q^2/a, q^(1-N), q^(2-N), q^2")
            .den("a*q^3/d, a*d*q^2, q^(3-N)/a^2, q^(4-N)/a^2")
            .phi()
            .arg("q^2")
            .upper("N"),
    );
    let fac = ex("a*q*(1 - q^(-N))*(1 - q/(a*d))*(1 - d/a)/((1 - q^(2-N)/a^2)*(1 - a*d)*(1 - a*q/d))", vec![]);
    let w = built(wseries(&ctx, "W", "a", "ra", &["s", "-s", "d", "q/d", "q", "a^2*q^N", "q^(-N)"], "q", "-a"));
    out.push(finite(
        "mz03_in_c2",
        "replace $k$ with $q$",
        "two 5-phi-4 in base q^2 against a 10-W-9 from the pair mz03",
        decls(&["a"], &["d"]),
        ex("$L1 - $F*$L2", vec![("L1", l1), ("L2", l2), ("F", fac)]),
        ex("[a, a^2; q]_N/[q*a, a^2/q; q]_N*$W", vec![("W", w)]),
    ));

    let (lhs, rhs) = war3_mz01("q*a^2/k^2");
    out.push(finite(
        "war3_mz01",
        "can be rewritten as",
        "12-W-11 against 7-phi-6 with imaginary parameters, from the third chain and mz01 (third numerator read as qa^2/k^2)",
        decls(&["a", "k"], &[]),
        lhs,
        rhs,
    ));
    let (lhs, rhs) = war3_mz01("a^2*q/k");
    out.push(
        finite(
            "war3_mz01_verbatim",
            "can be rewritten as",
            "12-W-11 against 7-phi-6, third numerator a^2 q/k as displayed",
            decls(&["a", "k"], &[]),
            lhs,
            rhs,
        )
        .misprint("the numerator a^2 q/k should be q a^2/k^2, the alpha parameter of mz01"),
    );

    let lhs = built(
        SeriesBuilder::new(&ctx, "lhs")
            .num("C, q*rC, -q*rC, a, q/a, -C, d, q/d")
            .den("rC, -rC, C*q/a, a*C, -q, C*q/d, C*d")
            .phi()
            .arg("-C"),
    );
    let rhs = ex("[C, C*q; q]_inf*[a*C*d, a*C*q/d, C*d*q/a, C*q^2/(a*d); q^2]_inf/[C*d, C*q/d, a*C, C*q/a; q]_inf", vec![]);
    out.push(
        infinite(
            "whipple_q",
            "a $q$-analogue of Whipple's",
            "nonterminating 8-phi-7 with argument -C summed as a product",
            decls(&["C"], &["a", "d"]),
            lhs,
            rhs,
        )
        .ranges(&[("C", (1, 10), (3, 4)), ("a", (1, 2), (2, 1)), ("d", (1, 2), (2, 1))]),
    );

    let lhs = built(
        SeriesBuilder::new(&ctx, "lhs")
            .num("C, q*rC, -q*rC, d, q/d, -C, q^(-N), q^(1+N)")
            .den("rC, -rC, C*q/d, d*C, -q, C*q^(1+N), C*q^(-N)")
            .phi()
            .arg("-C")
            .upper("N"),
    );
    let rhs = ex(
        "[C*q; q]_N/[q/C; q]_N*parity(N, [q^2/(d*C), d*q/C; q^2]_(N/2)/[d*C*q, C*q^2/d; q^2]_(N/2), \
         [q/(d*C), d/C; q^2]_((N+1)/2)/[d*C, C*q/d; q^2]_((N+1)/2)*(-C))",
        vec![],
    );
    out.push(finite(
        "whipple_q_finite",
        "upon setting $a=q^{-n}$",
        "terminating Whipple analogue at a = q^(-N), by parity of N",
        decls(&["C"], &["d"]),
        lhs,
        rhs,
    ));

    out.push(finite(
        "pfaff_saalschutz",
        "the $q$-Pfaff-Saalsch",
        "balanced terminating 3-phi-2 sum",
        decls(&[], &["a", "b", "c"]),
        built(SeriesBuilder::new(&ctx, "lhs").num("a, b, q^(-N)").den("c, a*b*q^(1-N)/c").phi().arg("q").upper("N")),
        ex("[c/a, c/b; q]_N/[c, c/(a*b); q]_N", vec![]),
    ));
    out
}

// ---------------------------------------------------------------------------
// The WP-Burge pair
// ---------------------------------------------------------------------------

fn burge_8phi7(lower: i64) -> (Expr, Expr) {
    let ctx = ParseCtx::new();
    let lhs = built(
        SeriesBuilder::new(&ctx, "lhs")
            .num("k, q*rk, -q*rk, y, z, k*s, k*q^(1+N)/(y*z), q^(-N)")
            .den("rk, -rk, q*k/y, q*k/z, s, k*q^(1+N), y*z*q^(-N)")
            .phi()
            .arg("s")
            .upper("N"),
    );
    let sum = built(
        SeriesBuilder::new(&ctx, "rhs")
            .num("y, z, k*q^(1+N)/(y*z), q^(-N)")
            .den("q/y, q/z, q^(1+N), y*z*q^(-N)/k")
            .arg("s/k")
            .mult("1 + q^n")
            .lower(lower)
            .upper("N"),
    );
    let rhs = ex("[q*k, q*k/(y*z), q/y, q/z; q]_N/[q*k/y, q*k/z, q, q/(y*z); q]_N*(1 + $S)", vec![("S", sum)]);
    (lhs, rhs)
}

fn burge_family() -> Vec<Identity> {
    let ctx = ParseCtx::new();
    let mut out = Vec::new();

    let lhs = built(
        SeriesBuilder::new(&ctx, "lhs")
            .base("q^2")
            .num("c, e")
            .den("q^2/c, q^2/e")
            .arg("q/(c*e)")
            .mult("1 + q^(2*n)")
            .lower(1),
    );
    out.push(
        infinite(
            "psi6_special",
            "replacing c^2 with c",
            "folded 6-psi-6 at a = -1, b = -c, d = -e, product side with the repeated factor as displayed",
            decls(&[], &["c", "e"]),
            ex(
                "[-q, q/c, q/e; q]_inf*[q^2/(c*e), q^2/(c*e), q^2; q^2]_inf\
                 /([q/(c*e); q]_inf*[q^2/c, q^2/c, q^2/e, q^2/e; q^2]_inf)",
                vec![],
            ),
            ex("1 + $S", vec![("S", lhs)]),
        )
        .ranges(&[("c", (1, 1), (4, 1)), ("e", (1, 1), (4, 1))]),
    );

    let sum = built(
        SeriesBuilder::new(&ctx, "lhs")
            .num("k*q^N, q^(-N)")
            .den("q^(1-N)/k, q^(1+N)")
            .arg("q/k")
            .mult("s^(-n) + s^n")
            .lower(1)
            .upper("N"),
    );
    out.push(finite(
        "burge_finite",
        "The result now follows",
        "finite sum behind the WP-Burge pair",
        decls(&[], &["k"]),
        ex("1 + $S", vec![("S", sum)]),
        ex("[k*s, q; q]_N/[k, s; q]_N*s^(-N)", vec![]),
    ));

    let lhs = built(SeriesBuilder::new(&ctx, "lhs").num("y, z").arg("q/(y*z)").mult("s^(-n)/[s, q; q]_n"));
    let sum = built(
        SeriesBuilder::new(&ctx, "rhs").num("y, z").den("q/y, q/z").arg("q/(y*z)").mult("ifzero(n, 1, s^(-n) + s^n)"),
    );
    out.push(
        infinite(
            "bailey_transform",
            "the Bailey Transform",
            "Bailey's transform at x = q for the k = 0 Burge pair",
            decls(&[], &["y", "z"]),
            lhs,
            ex("[q/y, q/z; q]_inf/[q, q/(y*z); q]_inf*$S", vec![("S", sum)]),
        )
        .ranges(&[("y", (2, 1), (4, 1)), ("z", (2, 1), (4, 1))]),
    );

    let (lhs, rhs) = burge_8phi7(1);
    out.push(finite(
        "burge_8phi7",
        "leads to the following corollary",
        "8-phi-7 with argument sqrt(q) from the Burge pair (inner sum from n = 1)",
        decls(&["k"], &["y", "z"]),
        lhs,
        rhs,
    ));
    let (lhs, rhs) = burge_8phi7(0);
    out.push(
        finite(
            "burge_8phi7_verbatim",
            "leads to the following corollary",
            "8-phi-7 with argument sqrt(q), inner sum from n = 0 as displayed",
            decls(&["k"], &["y", "z"]),
            lhs,
            rhs,
        )
        .misprint("the inner sum must start at n = 1; alpha_0 = 1 is the separate leading 1"),
    );

    let rr1 = built(
        SeriesBuilder::new(&ctx, "lhs")
            .num_with("k", "q", 2)
            .den_with("q", "q", 2)
            .mult("(1 - k*q^(4*n))/(1 - k)*q^(2*n^2 - n)")
            .valuation("4*n^2 - 2*n"),
    );
    out.push(power_series(
        "burge_rr1",
        "(kq^2;q^2)_{\\infty}",
        "lifted Rogers-Ramanujan type identity with product (kq^2;q^2)/(q;q^2)",
        decls(&[], &["k"]),
        rr1,
        ex("[k*q^2; q^2]_inf/[q; q^2]_inf", vec![]),
    ));
    let rr2 = built(
        SeriesBuilder::new(&ctx, "lhs")
            .num("k")
            .den("q")
            .mult("(1 - k*q^(2*n))/(1 - k)*(-1)^n*q^(n*(n - 1)/2)")
            .valuation("n*(n - 1)"),
    );
    out.push(power_series(
        "burge_rr2",
        "= 0",
        "alternating lifted sum that vanishes identically",
        decls(&[], &["k"]),
        rr2,
        Expr::int(0),
    ));
    let rr3 = built(
        SeriesBuilder::new(&ctx, "lhs")
            .num_with("-q", "q^2", 1)
            .num_with("k", "q", 2)
            .den_with("-k*q", "q^2", 1)
            .den_with("q", "q", 2)
            .mult("(1 - k*q^(4*n))/(1 - k)*q^(n^2 - n)")
            .valuation("2*n^2 - 2*n"),
    );
    out.push(power_series(
        "burge_rr3",
        "(kq^2,-1;q^2)_{\\infty}",
        "lifted identity with product (kq^2,-1;q^2)/(-kq,q;q^2)",
        decls(&[], &["k"]),
        rr3,
        ex("[k*q^2, -1; q^2]_inf/[-k*q, q; q^2]_inf", vec![]),
    ));
    out
}

/// Every registered identity, sorted by id.
pub fn registry() -> Vec<Identity> {
    let mz01 = catalog_pair("mz01");
    let plugged = |r: Result<Identity>, id: &str| r.expect("pair plugs in").renamed(id);
    let mut out = vec![
        plugged(thm1_a(&mz01), "thm1_a"),
        plugged(thm1_b(&mz01), "thm1_b"),
        plugged(cor_inf_a(&mz01), "cor_inf_a").ranges(&[
            ("a", (1, 10), (1, 2)),
            ("k", (1, 2), (1, 1)),
            ("y", (2, 1), (4, 1)),
            ("z", (2, 1), (4, 1)),
        ]),
        plugged(cor_inf_b(&mz01), "cor_inf_b").ranges(&[("a", (1, 10), (1, 2)), ("k", (1, 2), (1, 1))]),
        plugged(war3_master(&mz01), "war3_master"),
    ];
    out.extend(simple_family());
    out.extend(new_pair_family());
    out.extend(burge_family());
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::catalog;

    #[test]
    fn ids_unique_and_enough() {
        let r = registry();
        assert!(r.len() >= 25, "{}", r.len());
        let mut ids: Vec<&str> = r.iter().map(|i| i.id.as_str()).collect();
        ids.dedup();
        assert_eq!(ids.len(), r.len());
        for want in [
            "thm1_a", "thm1_b", "cor_inf_a", "cor_inf_b", "simple_master", "alt_sum", "alt_sum_qdixon", "count_sum",
            "tele_a", "tele_b", "theta_sum", "sv_special", "sv_special_q", "war3_master", "war3_aq", "mz01_in_c1",
            "mz01_in_c2", "mz03_in_c1", "mz03_in_c1_lim", "mz03_in_c1_lim_alt", "mz03_in_c2", "war3_mz01", "whipple_q",
            "whipple_q_finite", "pfaff_saalschutz", "psi6_special", "burge_finite", "bailey_transform", "burge_8phi7",
            "burge_rr1", "burge_rr2", "burge_rr3",
        ] {
            assert!(ids.contains(&want), "missing {want}");
        }
    }

    #[test]
    fn symbols_declared() {
        for i in registry() {
            let mut known = i.free_symbols();
            known.extend(i.decls.iter().map(|d| d.coord()));
            for s in i.used_symbols() {
                assert!(known.contains(&s), "{}: `{s}` undeclared", i.id);
            }
        }
    }

    #[test]
    fn pole_factors_present() {
        for i in registry() {
            assert!(!i.pole_factors().is_empty(), "{}", i.id);
        }
        // the k in the denominator yzq^{-N}/k is listed
        let c1 = registry().into_iter().find(|i| i.id == "mz01_in_c1").unwrap();
        assert!(c1.pole_factors().iter().any(|f| f.contains("y*z*q^(-N)/k")), "{:?}", c1.pole_factors());
    }

    #[test]
    fn default_backend_admissible() {
        for i in registry() {
            assert!(i.admits(i.default_backend), "{}", i.id);
        }
    }

    #[test]
    fn plugs_every_catalog_pair() {
        for p in catalog() {
            for ident in [thm1_a(&p), thm1_b(&p), war3_master(&p)] {
                let ident = ident.unwrap();
                assert_eq!(ident.pair.as_deref(), Some(p.id.as_str()));
            }
        }
    }
}

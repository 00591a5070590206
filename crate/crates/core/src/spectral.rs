//! The spectral engine.
//!
//! Free eigenvalues E₀, interaction coefficients S_ν, the expansion
//! coefficients α_n(m) as walk sums over pair moves ν·E_{jk}, the
//! spectral function Φ_n(ξ) over closed walks, and the elliptic
//! eigenvalue by fixed-point iteration or Lagrange-series inversion.
//!
//! All walk sums run through one generic solver parameterized over the
//! coefficient ring, so the exact rational, formal q²-series, float,
//! and Taylor-jet modes share the same enumeration.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::coeff::{Jet, Scalar};
use crate::error::{Error, Result};
use crate::intvec::{IntVector, Partition};
use crate::model::{EllipticParams, ModelParams};
use crate::qseries::QSeries;
use crate::rational::{rat_int, Rational};

/// E₀(m) = Σ_j (m_j + λ(N+1-2j)/2)², exact.
pub fn e0(m: &IntVector, params: &ModelParams) -> Rational {
    let n = params.n_vars() as i64;
    let half_lambda = params.lambda() / rat_int(2);
    let mut acc = Rational::zero();
    for (j, &mj) in m.0.iter().enumerate() {
        let shift = &half_lambda * rat_int(n + 1 - 2 * (j as i64 + 1));
        let term = rat_int(mj) + shift;
        acc += &term * &term;
    }
    acc
}

/// E₀ with a center-of-mass momentum p: shifts every entry by p.
pub fn e0_with_momentum(m: &IntVector, p: i64, params: &ModelParams) -> Rational {
    let shifted = IntVector::new(m.0.iter().map(|x| x + p).collect());
    e0(&shifted, params)
}

/// Ground-state energy λ²N(N²-1)/12.
pub fn ground_state_energy(params: &ModelParams) -> Rational {
    let n = params.n_vars() as i64;
    let lam = params.lambda();
    lam * lam * rat_int(n * (n * n - 1)) / rat_int(12)
}

/// E₀(n + Σ μ_{jk} E_{jk}) - E₀(n) by the closed form
///
///   Σ_j ( 2 Σ_{k>j} μ_{jk} [n_j - n_k + (k-j)λ]
///         + [Σ_{k<j} μ_{kj} - Σ_{k>j} μ_{jk}]² ),
///
/// manifestly positive for partitions n and μ ≥ 0 not all zero.
pub fn energy_diff(
    n: &Partition,
    mu: &BTreeMap<(usize, usize), i64>,
    params: &ModelParams,
) -> Result<Rational> {
    let nv = params.n_vars();
    if mu.values().all(|&v| v == 0) {
        return Err(Error::InvalidInput("all mu are zero".into()));
    }
    for (&(j, k), &v) in mu {
        if j >= k || k >= nv || v < 0 {
            return Err(Error::InvalidInput(format!("bad mu entry ({j},{k}) -> {v}")));
        }
    }
    let lam = params.lambda();
    let mut acc = Rational::zero();
    for j in 0..nv {
        let mut lin = Rational::zero();
        let mut net = 0i64;
        for k in 0..nv {
            if k > j {
                let m = mu.get(&(j, k)).copied().unwrap_or(0);
                if m != 0 {
                    let bracket =
                        rat_int(n.vector().0[j] - n.vector().0[k]) + rat_int((k - j) as i64) * lam;
                    lin += rat_int(2 * m) * bracket;
                    net -= m;
                }
            } else if k < j {
                net += mu.get(&(k, j)).copied().unwrap_or(0);
            }
        }
        acc += lin + rat_int(net * net);
    }
    if acc <= Rational::zero() {
        return Err(Error::NonPositiveDiff);
    }
    Ok(acc)
}

/// Interaction coefficients S_ν.
///
/// Trigonometric: S_ν = ν for ν > 0, zero otherwise. Elliptic:
/// S_ν = ν/(1-q^{2ν}) and S_{-ν} = ν q^{2ν}/(1-q^{2ν}) for ν > 0; the
/// difference S_ν - S_{-ν} = ν holds exactly in both modes.
pub fn s_trig(nu: i64) -> Rational {
    if nu > 0 {
        rat_int(nu)
    } else {
        Rational::zero()
    }
}

pub fn s_elliptic(nu: i64, k: usize) -> QSeries {
    if nu == 0 {
        return QSeries::zero(k);
    }
    let anu = nu.unsigned_abs() as usize;
    let start = if nu > 0 { 0 } else { 1 };
    let mut coeffs: Vec<Rational> = vec![Rational::zero(); k + 1];
    let mut d = start * anu;
    while d <= k {
        coeffs[d] = rat_int(nu.abs());
        d += anu;
    }
    QSeries::from_coeffs(coeffs)
}

pub fn s_numeric(nu: i64, q: f64) -> f64 {
    if nu == 0 {
        return 0.0;
    }
    let anu = nu.abs() as f64;
    let q2nu = q.powi(2 * nu.abs() as i32);
    if nu > 0 {
        anu / (1.0 - q2nu)
    } else {
        anu * q2nu / (1.0 - q2nu)
    }
}

/// Expansion coefficients α_n(m) anchored at a base vector.
#[derive(Clone, Debug)]
pub struct AlphaTable<C: Scalar> {
    pub base: IntVector,
    pub entries: BTreeMap<IntVector, C>,
}

/// State-space box in prefix-sum coordinates: vertex m has weight equal
/// to the base and prefix sums P_j(m) within [lo_j, hi_j] for j < N.
struct PrefixBox {
    lo: Vec<i64>,
    hi: Vec<i64>,
    weight: i64,
}

impl PrefixBox {
    /// All vertices ordered by total transport Σ P_j (walks only raise it
    /// one q²-free step at a time, so this is a valid processing order).
    fn vertices(&self) -> Vec<IntVector> {
        let n = self.lo.len() + 1;
        let mut prefixes: Vec<Vec<i64>> = vec![vec![]];
        for j in 0..self.lo.len() {
            let mut next = Vec::new();
            for p in &prefixes {
                for v in self.lo[j]..=self.hi[j] {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
            prefixes = next;
        }
        let mut verts: Vec<(i64, IntVector)> = prefixes
            .into_iter()
            .map(|p| {
                let t: i64 = p.iter().sum();
                let mut m = Vec::with_capacity(n);
                let mut prev = 0;
                for &x in &p {
                    m.push(x - prev);
                    prev = x;
                }
                m.push(self.weight - prev);
                (t, IntVector::new(m))
            })
            .collect();
        verts.sort();
        verts.into_iter().map(|(_, m)| m).collect()
    }
}

fn prefix_of(m: &IntVector) -> Vec<i64> {
    let p = m.prefix_sums();
    p[..p.len() - 1].to_vec()
}

/// Generic Gauss-Seidel solve of α = δ_base + γ R α over a prefix box.
///
/// The trigonometric instance is triangular in transport order and
/// settles in one sweep; elliptic instances gain one q²-order per sweep.
fn alpha_solve<S: Scalar>(
    base: &IntVector,
    bx: &PrefixBox,
    e_base: &S,
    gamma: &Rational,
    s_fn: &dyn Fn(i64) -> S,
    proto: &S,
    params: &ModelParams,
    max_sweeps: usize,
) -> Result<BTreeMap<IntVector, S>> {
    let n = params.n_vars();
    let verts = bx.vertices();
    let gamma_s = proto.from_rational(gamma);
    let mut table: BTreeMap<IntVector, S> = BTreeMap::new();
    table.insert(base.clone(), proto.one_like());

    let mut stabilized = false;
    for _ in 0..max_sweeps {
        let snapshot = table.clone();
        for v in &verts {
            if v == base {
                continue;
            }
            let vp = prefix_of(v);
            let mut inflow = proto.zero_like();
            for j in 0..n {
                for k in (j + 1)..n {
                    // step u -> v adds ν to prefixes j..k-1; admissible ν
                    // keep u = v - ν E_{jk} inside the box
                    let mut nu_min = i64::MIN;
                    let mut nu_max = i64::MAX;
                    for i in j..k {
                        nu_min = nu_min.max(vp[i] - bx.hi[i]);
                        nu_max = nu_max.min(vp[i] - bx.lo[i]);
                    }
                    for nu in nu_min..=nu_max {
                        if nu == 0 {
                            continue;
                        }
                        let s = s_fn(nu);
                        if s.is_zero() {
                            continue;
                        }
                        let u = v.step(j, k, -nu);
                        if let Some(au) = table.get(&u) {
                            if !au.is_zero() {
                                inflow = inflow.add(&s.mul(au));
                            }
                        }
                    }
                }
            }
            let scaled = gamma_s.mul(&inflow);
            if scaled.is_zero() {
                table.remove(v);
                continue;
            }
            let den = proto.from_rational(&e0(v, params)).sub(e_base);
            let inv = den
                .inv()
                .map_err(|_| Error::DegenerateDenominator(v.0.clone()))?;
            table.insert(v.clone(), inv.mul(&scaled));
        }
        if table == snapshot {
            stabilized = true;
            break;
        }
    }
    if !stabilized {
        return Err(Error::InvalidInput(
            "walk iteration did not stabilize within the sweep budget".into(),
        ));
    }
    Ok(table)
}

/// Trigonometric α table.
///
/// The assembly support is the tail box (all prefix sums at most the
/// weight); `window_margin` widens it so entries beyond the vanishing
/// cutoff of f can be inspected.
pub fn alpha_trig(
    n: &IntVector,
    params: &ModelParams,
    window_margin: i64,
) -> Result<AlphaTable<Rational>> {
    if n.len() != params.n_vars() {
        return Err(Error::LengthMismatch(n.len(), params.n_vars()));
    }
    let w = n.weight();
    let p = prefix_of(n);
    let bx = PrefixBox {
        lo: p.clone(),
        hi: vec![w + window_margin; p.len()],
        weight: w,
    };
    let e_base = e0(n, params);
    let proto = Rational::zero();
    let entries = alpha_solve(
        n,
        &bx,
        &e_base,
        &params.gamma(),
        &s_trig,
        &proto,
        params,
        4,
    )
    .map_err(|e| match e {
        Error::DegenerateDenominator(v) => Error::DegenerateSpectrum(v),
        other => other,
    })?;
    Ok(AlphaTable {
        base: n.clone(),
        entries,
    })
}

/// Elliptic α table through q²-order K, given the eigenvalue series.
pub fn alpha_elliptic(
    n: &IntVector,
    e_series: &QSeries,
    params: &ModelParams,
    ell: &EllipticParams,
) -> Result<AlphaTable<QSeries>> {
    if n.len() != params.n_vars() {
        return Err(Error::LengthMismatch(n.len(), params.n_vars()));
    }
    let k = ell.trunc_order();
    let w = n.weight();
    let p = prefix_of(n);
    let ki = k as i64;
    // DP box allows an extra K of upward excursion beyond the reported
    // region; every unit must be paid back by q²-costing down steps
    let bx = PrefixBox {
        lo: p.iter().map(|x| x - ki).collect(),
        hi: vec![w + 2 * ki; p.len()],
        weight: w,
    };
    let proto = QSeries::zero(k);
    let s_fn = move |nu: i64| s_elliptic(nu, k);
    let entries = alpha_solve(
        n,
        &bx,
        e_series,
        &params.gamma(),
        &s_fn,
        &proto,
        params,
        k + 3,
    )?;
    // report only the assembly-relevant region
    let entries = entries
        .into_iter()
        .filter(|(m, _)| {
            let mp = prefix_of(m);
            mp.iter().all(|&x| x <= w + ki)
        })
        .collect();
    Ok(AlphaTable {
        base: n.clone(),
        entries,
    })
}

/// The spectral function Φ_n(ξ): walk sum over closed loops at n.
///
/// Computed by a path transform W(v) over walks n → v that never revisit
/// n, closed by a final single step back to n. Trigonometric mode gives
/// identically zero (every closed walk needs a negative step).
fn phi_generic<S: Scalar>(
    n: &IntVector,
    xi: &S,
    gamma: &Rational,
    s_fn: &dyn Fn(i64) -> S,
    proto: &S,
    params: &ModelParams,
    order_budget: usize,
    max_sweeps: usize,
) -> Result<S> {
    let nv = params.n_vars();
    if Zero::is_zero(gamma) || order_budget == 0 {
        return Ok(proto.zero_like());
    }
    let p = prefix_of(n);
    let ki = order_budget as i64;
    let bx = PrefixBox {
        lo: p.iter().map(|x| x - ki).collect(),
        hi: p.iter().map(|x| x + ki).collect(),
        weight: n.weight(),
    };
    let verts = bx.vertices();
    let gamma_s = proto.from_rational(gamma);

    let mut w_map: BTreeMap<IntVector, S> = BTreeMap::new();
    let mut stabilized = false;
    for _ in 0..max_sweeps {
        let snapshot = w_map.clone();
        for v in &verts {
            if v == n {
                continue;
            }
            let vp = prefix_of(v);
            let mut inflow = proto.zero_like();
            for j in 0..nv {
                for k in (j + 1)..nv {
                    let mut nu_min = i64::MIN;
                    let mut nu_max = i64::MAX;
                    for i in j..k {
                        nu_min = nu_min.max(vp[i] - bx.hi[i]);
                        nu_max = nu_max.min(vp[i] - bx.lo[i]);
                    }
                    for nu in nu_min..=nu_max {
                        if nu == 0 {
                            continue;
                        }
                        let s = s_fn(nu);
                        if s.is_zero() {
                            continue;
                        }
                        let u = v.step(j, k, -nu);
                        if &u == n {
                            // initial step leaving the base
                            inflow = inflow.add(&s);
                        } else if let Some(wu) = w_map.get(&u) {
                            if !wu.is_zero() {
                                inflow = inflow.add(&s.mul(wu));
                            }
                        }
                    }
                }
            }
            let scaled = gamma_s.mul(&inflow);
            if scaled.is_zero() {
                w_map.remove(v);
                continue;
            }
            let den = proto.from_rational(&e0(v, params)).sub(xi);
            let inv = den
                .inv()
                .map_err(|_| Error::DegenerateDenominator(v.0.clone()))?;
            w_map.insert(v.clone(), inv.mul(&scaled));
        }
        if w_map == snapshot {
            stabilized = true;
            break;
        }
    }
    if !stabilized {
        return Err(Error::InvalidInput(
            "spectral-function iteration did not stabilize".into(),
        ));
    }

    // close each path with a single step back to n
    let mut phi = proto.zero_like();
    for (v, wv) in &w_map {
        // the closing step v -> n must be a pair move
        let diff: Vec<i64> = n.0.iter().zip(&v.0).map(|(a, b)| a - b).collect();
        if let Some((_, _, nu)) = pair_move(&diff) {
            let s = s_fn(nu);
            if !s.is_zero() {
                phi = phi.add(&wv.mul(&gamma_s).mul(&s));
            }
        }
    }
    Ok(phi.neg())
}

/// Decomposes a difference vector as ν·E_{jk} if possible.
fn pair_move(diff: &[i64]) -> Option<(usize, usize, i64)> {
    let nz: Vec<usize> = (0..diff.len()).filter(|&i| diff[i] != 0).collect();
    if nz.len() != 2 {
        return None;
    }
    let (a, b) = (nz[0], nz[1]);
    if diff[a] + diff[b] != 0 {
        return None;
    }
    Some((a, b, diff[a]))
}

/// Φ_n(ξ) as a formal q²-series; zero in the trigonometric limit.
pub fn phi_series(
    n: &IntVector,
    xi: &QSeries,
    params: &ModelParams,
    ell: &EllipticParams,
) -> Result<QSeries> {
    let k = ell.trunc_order();
    let s_fn = move |nu: i64| s_elliptic(nu, k);
    phi_generic(
        n,
        xi,
        &params.gamma(),
        &s_fn,
        &QSeries::zero(k),
        params,
        k,
        k + 3,
    )
}

/// Φ_n(ξ) at a numeric nome, truncating walks at the given q²-order.
pub fn phi_numeric(
    n: &IntVector,
    xi: f64,
    params: &ModelParams,
    q: f64,
    order: usize,
) -> Result<f64> {
    let s_fn = move |nu: i64| s_numeric(nu, q);
    // float iteration: run sweeps until the value stops moving
    phi_generic(
        n,
        &xi,
        &params.gamma(),
        &s_fn,
        &0.0f64,
        params,
        order,
        60,
    )
}

/// Eigenvalue diagnostics for the result surface.
#[derive(Clone, Debug)]
pub struct EigenvalueDiagnostics {
    pub iterations: usize,
    pub a: Option<Rational>,
    pub delta: Option<Rational>,
}

/// Solves E = E₀(n) + Φ_n(E) order by order in q².
///
/// Φ is O(q²), so each substitution pins one further order; the loop
/// stops when the series reproduces itself.
pub fn eigenvalue_fixed_point(
    n: &Partition,
    params: &ModelParams,
    ell: &EllipticParams,
) -> Result<(QSeries, EigenvalueDiagnostics)> {
    let k = ell.trunc_order();
    let e0n = e0(n.vector(), params);
    let mut e = QSeries::constant(e0n.clone(), k);
    let mut iterations = 0;
    for _ in 0..=(k + 1) {
        iterations += 1;
        let phi = phi_series(n.vector(), &e, params, ell)?;
        let next = QSeries::constant(e0n.clone(), k).add(&phi)?;
        if next == e {
            return Ok((
                e,
                EigenvalueDiagnostics {
                    iterations,
                    a: None,
                    delta: None,
                },
            ));
        }
        e = next;
    }
    Err(Error::InvalidInput(
        "fixed-point iteration did not settle within the order budget".into(),
    ))
}

/// Solves the implicit eigenvalue equation by Lagrange inversion around
/// the shifted point ξ₀ = E₀(n) + a:
///
///   E = ξ₀ + Σ_{s≥1} (1/s!) ∂^{s-1}_ξ [ (Φ_n(ξ) - a)^s ] |_{ξ₀}.
///
/// At a = 0 this is the familiar Σ (1/s!) ∂^{s-1} Φ^s form and the series
/// terminates order by order; for a ≠ 0 the s-sum converges geometrically
/// at rate |a| over the spectral gap, so `terms` controls the accuracy.
pub fn eigenvalue_lagrange(
    n: &Partition,
    a: &Rational,
    params: &ModelParams,
    ell: &EllipticParams,
    terms: usize,
) -> Result<(QSeries, EigenvalueDiagnostics)> {
    let k = ell.trunc_order();
    let e0n = e0(n.vector(), params);
    let xi0 = &e0n + a;

    // gap sanity over the walk box: no enumerated denominator may sit at
    // the expansion point
    let p = prefix_of(n.vector());
    let ki = k.max(1) as i64;
    let bx = PrefixBox {
        lo: p.iter().map(|x| x - ki).collect(),
        hi: p.iter().map(|x| x + ki).collect(),
        weight: n.weight(),
    };
    let mut delta: Option<Rational> = None;
    for v in bx.vertices() {
        if &v == n.vector() {
            continue;
        }
        let d = e0(&v, params) - &xi0;
        let d = if d < Rational::zero() { -d } else { d };
        if Zero::is_zero(&d) {
            return Err(Error::GapViolation(format!(
                "denominator at {v} coincides with the expansion point"
            )));
        }
        if delta.as_ref().map_or(true, |cur| &d < cur) {
            delta = Some(d);
        }
    }

    let ord = terms.saturating_sub(1);
    let q_proto = QSeries::zero(k);
    let xi_jet: Jet<QSeries> = Jet::variable(QSeries::constant(xi0.clone(), k), ord);
    let proto_jet: Jet<QSeries> = Jet::constant(q_proto.clone(), ord);
    let s_fn = move |nu: i64| Jet::constant(s_elliptic(nu, k), ord);
    let phi_jet = phi_generic(
        n.vector(),
        &xi_jet,
        &params.gamma(),
        &s_fn,
        &proto_jet,
        params,
        k,
        k + 3,
    )?;

    // G = Φ(ξ₀ + t) - a
    let a_jet = proto_jet.from_rational(a);
    let g = phi_jet.sub(&a_jet);

    let mut acc = QSeries::constant(xi0.clone(), k);
    let mut g_pow = g.clone();
    for s in 1..=terms {
        // (1/s!) ∂^{s-1} G^s = (1/s) [t^{s-1}] G^s
        let coeff = g_pow.coeff(s - 1);
        let term = coeff.scale(&Rational::new(1.into(), (s as i64).into()));
        acc = acc.add(&term)?;
        if s < terms {
            g_pow = g_pow.mul(&g);
        }
    }
    Ok((
        acc,
        EigenvalueDiagnostics {
            iterations: terms,
            a: Some(a.clone()),
            delta,
        },
    ))
}

/// Empirical gap certificate: the minimum of |E₀(m) - E₀(n) - a| over
/// all m ≠ n of equal weight whose prefix sums stay within `window`
/// transport of the base. Returns None when the searched region is
/// empty. A lower bound over the searched region only.
pub fn gap_delta(
    n: &IntVector,
    a: &Rational,
    params: &ModelParams,
    window: i64,
) -> Result<Option<Rational>> {
    let w = n.weight();
    if window < w {
        return Err(Error::InvalidInput(format!(
            "window {window} below the base weight {w}"
        )));
    }
    let slack = window - w;
    let p = prefix_of(n);
    let bx = PrefixBox {
        lo: p.iter().map(|x| x - slack).collect(),
        hi: p.iter().map(|x| x + slack).collect(),
        weight: w,
    };
    let e0n = e0(n, params);
    let target = &e0n + a;
    let mut best: Option<Rational> = None;
    for v in bx.vertices() {
        if &v == n {
            continue;
        }
        let d = e0(&v, params) - &target;
        let d = if d < Rational::zero() { -d } else { d };
        if best.as_ref().map_or(true, |cur| &d < cur) {
            best = Some(d);
        }
    }
    Ok(best)
}

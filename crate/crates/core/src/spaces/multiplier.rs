use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::splinecore::KnotVector;

/// Construction of the Lagrange multiplier space on a slave face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MultiplierVariant {
    /// Same degree and knots as the trace, degree-reduced on the first or
    /// last element at flagged ends.
    EqualOrderModified,
    /// Degree `p - k` on the knot vector trimmed by `k` knots at each end.
    ReducedDegree(usize),
}

impl MultiplierVariant {
    pub const DEGREE_MINUS_ONE: Self = MultiplierVariant::ReducedDegree(1);
    pub const DEGREE_MINUS_TWO: Self = MultiplierVariant::ReducedDegree(2);

    /// Multiplier degree for primal degree `p`.
    pub fn dual_degree(self, p: usize) -> Option<usize> {
        match self {
            MultiplierVariant::EqualOrderModified => Some(p),
            MultiplierVariant::ReducedDegree(k) => p.checked_sub(k),
        }
    }

    /// Guaranteed broken-V convergence rate for smooth solutions: `p` for
    /// the modified equal-order space, `p - 1/2` for `pm2`, none for the
    /// unstable `pm1`.
    pub fn expected_rate(self, p: usize) -> Option<f64> {
        match self {
            MultiplierVariant::EqualOrderModified => Some(p as f64),
            MultiplierVariant::ReducedDegree(2) => Some(p as f64 - 0.5),
            MultiplierVariant::ReducedDegree(_) => None,
        }
    }

    /// Token for the multiplier of degree `dual` paired with primal degree `p`.
    pub fn for_degrees(p: usize, dual: usize) -> Option<Self> {
        match p.checked_sub(dual)? {
            0 => Some(MultiplierVariant::EqualOrderModified),
            k => Some(MultiplierVariant::ReducedDegree(k)),
        }
    }
}

impl fmt::Display for MultiplierVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiplierVariant::EqualOrderModified => f.write_str("equal-modified"),
            MultiplierVariant::ReducedDegree(k) => write!(f, "pm{k}"),
        }
    }
}

impl FromStr for MultiplierVariant {
    type Err = Error;

    /// Accepts `equal-modified`, `pm1`, `pm2` and generally `pm<k>`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "equal-modified" || t == "pm0" {
            return Ok(MultiplierVariant::EqualOrderModified);
        }
        t.strip_prefix("pm")
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| k > 0)
            .map(MultiplierVariant::ReducedDegree)
            .ok_or_else(|| Error::Config(format!("unknown multiplier variant `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Start,
    End,
}

/// Coefficients of the degree reduction at one end of `kv`: `α` for the
/// functions `2..=p+1` (start) or `β` for `n-p..=n-1` (end), 1-based.
/// `B̂_i + α_i B̂_1` then has vanishing `p`-th derivative on the first element.
pub fn boundary_modification_coeffs(kv: &KnotVector, end: End) -> Result<Vec<f64>> {
    let p = kv.degree();
    if p == 0 {
        return Err(Error::Precondition(
            "boundary modification needs degree at least 1".into(),
        ));
    }
    let elems = kv.elements();
    if elems.len() < 2 {
        return Err(Error::Precondition(
            "boundary modification needs at least 2 elements".into(),
        ));
    }
    let n = kv.dim();
    let (_, a, b) = match end {
        End::Start => elems[0],
        End::End => elems[elems.len() - 1],
    };
    let ev = kv.eval_basis(0.5 * (a + b), p)?;
    let dp = |i: usize| -> f64 {
        ev.indices()
            .position(|k| k == i)
            .map_or(0.0, |k| ev.derivative(p)[k])
    };
    let (pivot, range) = match end {
        End::Start => (0, 1..p + 1),
        End::End => (n - 1, n - p - 1..n - 1),
    };
    let denom = dp(pivot);
    assert!(
        denom.abs() > 0.0,
        "end function of an open knot vector has full degree on its element"
    );
    Ok(range.map(|i| -dp(i) / denom).collect())
}

/// Lagrange multiplier space on one interface: every basis function is a
/// combination of the B-splines of `knots`.
#[derive(Debug, Clone)]
pub struct MultiplierSpace {
    pub interface: Option<usize>,
    pub variant: MultiplierVariant,
    knots: KnotVector,
    modified: [bool; 2],
    alpha: Vec<f64>,
    beta: Vec<f64>,
    /// `functions[j]` lists `(i, c)` with `μ_j = Σ c B̂_i`.
    functions: Vec<Vec<(usize, f64)>>,
    /// Transposed view: `by_basis[i]` lists `(j, c)`.
    by_basis: Vec<Vec<(usize, f64)>>,
}

impl MultiplierSpace {
    /// Builds the multiplier space on the slave trace knot vector. The
    /// modification flags only affect [`MultiplierVariant::EqualOrderModified`].
    pub fn new(
        trace: &KnotVector,
        variant: MultiplierVariant,
        modify_start: bool,
        modify_end: bool,
    ) -> Result<Self> {
        let (knots, modified) = match variant {
            MultiplierVariant::EqualOrderModified => (trace.clone(), [modify_start, modify_end]),
            MultiplierVariant::ReducedDegree(k) => (trace.trim(k)?, [false, false]),
        };
        let n = knots.dim();
        let alpha = if modified[0] {
            boundary_modification_coeffs(&knots, End::Start)?
        } else {
            Vec::new()
        };
        let beta = if modified[1] {
            boundary_modification_coeffs(&knots, End::End)?
        } else {
            Vec::new()
        };
        let first = usize::from(modified[0]);
        let last = n - usize::from(modified[1]);
        if last <= first {
            return Err(Error::Precondition(format!(
                "multiplier space of dimension {n} cannot be modified at both ends"
            )));
        }
        let mut functions: Vec<Vec<(usize, f64)>> = (first..last).map(|i| vec![(i, 1.0)]).collect();
        for (k, a) in alpha.iter().enumerate() {
            functions[k + 1 - first].push((0, *a));
        }
        let p = knots.degree();
        for (k, b) in beta.iter().enumerate() {
            functions[n - p - 1 + k - first].push((n - 1, *b));
        }
        let mut by_basis = vec![Vec::new(); n];
        for (j, f) in functions.iter().enumerate() {
            for &(i, c) in f {
                by_basis[i].push((j, c));
            }
        }
        Ok(MultiplierSpace {
            interface: None,
            variant,
            knots,
            modified,
            alpha,
            beta,
            functions,
            by_basis,
        })
    }

    pub fn with_interface(mut self, l: usize) -> Self {
        self.interface = Some(l);
        self
    }

    /// Underlying knot vector.
    pub fn knots(&self) -> &KnotVector {
        &self.knots
    }

    pub fn degree(&self) -> usize {
        self.knots.degree()
    }

    pub fn dim(&self) -> usize {
        self.functions.len()
    }

    pub fn modified(&self) -> [bool; 2] {
        self.modified
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Representation of basis function `j` in the underlying B-splines.
    pub fn function(&self, j: usize) -> &[(usize, f64)] {
        &self.functions[j]
    }

    /// Non-zero `(j, μ_j^{(order)}(t))` pairs.
    pub fn eval_derivative(&self, t: f64, order: usize) -> Result<Vec<(usize, f64)>> {
        let ev = self.knots.eval_basis(t, order)?;
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(ev.values().len() + 2);
        for (i, v) in ev.indices().zip(ev.derivative(order)) {
            for &(j, c) in &self.by_basis[i] {
                match out.iter_mut().find(|e| e.0 == j) {
                    Some(e) => e.1 += c * v,
                    None => out.push((j, c * v)),
                }
            }
        }
        Ok(out)
    }

    pub fn eval(&self, t: f64) -> Result<Vec<(usize, f64)>> {
        self.eval_derivative(t, 0)
    }

    /// All basis values at `t` as a dense vector.
    pub fn eval_dense(&self, t: f64) -> Result<Vec<f64>> {
        let mut v = vec![0.0; self.dim()];
        for (j, x) in self.eval(t)? {
            v[j] = x;
        }
        Ok(v)
    }

    /// Value at `t` of the multiplier with coefficients `coeffs`.
    pub fn eval_function(&self, coeffs: &[f64], t: f64) -> Result<f64> {
        Ok(self.eval(t)?.into_iter().map(|(j, v)| coeffs[j] * v).sum())
    }
}

/// Coefficients `μ_i = (-1)^i (i-1)(n-i)`, `i = 1..n`, of the oscillating
/// mode of the degree `p - 1` multiplier space.
pub fn checkerboard_mode(space: &MultiplierSpace) -> Result<Vec<f64>> {
    if space.variant != MultiplierVariant::DEGREE_MINUS_ONE {
        return Err(Error::Precondition(format!(
            "checkerboard mode is defined for pm1, not {}",
            space.variant
        )));
    }
    let n = space.dim() as i64;
    Ok((1..=n)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            s * ((i - 1) * (n - i)) as f64
        })
        .collect())
}

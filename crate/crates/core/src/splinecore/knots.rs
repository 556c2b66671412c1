use std::ops::{Add, Mul};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Knots closer than this are merged when a knot vector is ingested.
pub const KNOT_SNAP: f64 = 1e-12;

/// Open univariate knot vector on `[0, 1]` together with its degree.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector {
    degree: usize,
    knots: Vec<f64>,
}

/// Values and derivatives of the `p + 1` basis functions that do not vanish
/// on one knot span.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisEvaluation {
    /// Index `i` with `knots[i] <= t < knots[i + 1]` (zero based).
    pub span: usize,
    /// Index of the first non-vanishing basis function, `span - degree`.
    pub first: usize,
    /// `ders[k][j]` is the `k`-th derivative of basis function `first + j`.
    pub ders: Vec<Vec<f64>>,
}

impl BasisEvaluation {
    pub fn values(&self) -> &[f64] {
        &self.ders[0]
    }

    pub fn derivative(&self, order: usize) -> &[f64] {
        &self.ders[order]
    }

    /// Global indices of the non-vanishing functions.
    pub fn indices(&self) -> std::ops::Range<usize> {
        self.first..self.first + self.ders[0].len()
    }
}

impl KnotVector {
    pub fn new(degree: usize, mut knots: Vec<f64>) -> Result<Self> {
        if knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::InvalidKnotVector("non-finite knot".into()));
        }
        for i in 1..knots.len() {
            if knots[i] < knots[i - 1] - KNOT_SNAP {
                return Err(Error::InvalidKnotVector(format!(
                    "knots decrease at position {i}"
                )));
            }
            if knots[i] - knots[i - 1] < KNOT_SNAP {
                knots[i] = knots[i - 1];
            }
        }
        if knots.len() < 2 * (degree + 1) {
            return Err(Error::InvalidKnotVector(format!(
                "{} knots cannot hold an open vector of degree {degree}",
                knots.len()
            )));
        }
        if knots[0].abs() > KNOT_SNAP || (knots[knots.len() - 1] - 1.0).abs() > KNOT_SNAP {
            return Err(Error::InvalidKnotVector(
                "knot vector must span [0, 1]".into(),
            ));
        }
        let len = knots.len();
        for k in &mut knots[..=degree] {
            *k = 0.0;
        }
        for k in &mut knots[len - degree - 1..] {
            *k = 1.0;
        }
        let kv = KnotVector { degree, knots };
        let mults = kv.multiplicities();
        if mults[0] != degree + 1 || mults[mults.len() - 1] != degree + 1 {
            return Err(Error::InvalidKnotVector(format!(
                "end knots must be repeated exactly {} times",
                degree + 1
            )));
        }
        let breaks = kv.breakpoints();
        for (z, m) in breaks.iter().zip(&mults).skip(1).take(mults.len() - 2) {
            if *m > degree.max(1) {
                return Err(Error::InvalidKnotVector(format!(
                    "interior knot {z} has multiplicity {m} > {degree}"
                )));
            }
        }
        Ok(kv)
    }

    /// Open knot vector with `elements` equally sized spans and simple interior knots.
    pub fn uniform(degree: usize, elements: usize) -> Self {
        assert!(elements > 0, "at least one element required");
        let mut knots = vec![0.0; degree + 1];
        for e in 1..elements {
            knots.push(e as f64 / elements as f64);
        }
        knots.extend(std::iter::repeat_n(1.0, degree + 1));
        KnotVector { degree, knots }
    }

    /// Open knot vector over the given breakpoints, every interior breakpoint
    /// repeated `multiplicity` times.
    pub fn from_breakpoints(degree: usize, breaks: &[f64], multiplicity: usize) -> Result<Self> {
        let mut knots = vec![0.0; degree + 1];
        for &b in &breaks[1..breaks.len() - 1] {
            knots.extend(std::iter::repeat_n(b, multiplicity));
        }
        knots.extend(std::iter::repeat_n(1.0, degree + 1));
        KnotVector::new(degree, knots)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Number of basis functions `n`.
    pub fn dim(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    /// Distinct knot values `ζ_1 < ... < ζ_E`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for &k in &self.knots {
            if out.last() != Some(&k) {
                out.push(k);
            }
        }
        out
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        let mut last = f64::NAN;
        for &k in &self.knots {
            if k == last {
                *out.last_mut().unwrap() += 1;
            } else {
                out.push(1);
                last = k;
            }
        }
        out
    }

    pub fn num_elements(&self) -> usize {
        self.breakpoints().len() - 1
    }

    /// Non-empty spans as `(span index, left, right)`.
    pub fn elements(&self) -> Vec<(usize, f64, f64)> {
        (self.degree..self.dim())
            .filter(|&i| self.knots[i + 1] > self.knots[i])
            .map(|i| (i, self.knots[i], self.knots[i + 1]))
            .collect()
    }

    pub fn max_element_size(&self) -> f64 {
        self.elements()
            .iter()
            .map(|(_, a, b)| b - a)
            .fold(0.0, f64::max)
    }

    /// Ratio of the largest to the smallest element.
    pub fn quasi_uniformity(&self) -> f64 {
        let sizes: Vec<f64> = self.elements().iter().map(|(_, a, b)| b - a).collect();
        let max = sizes.iter().cloned().fold(0.0, f64::max);
        let min = sizes.iter().cloned().fold(f64::INFINITY, f64::min);
        max / min
    }

    /// Knot averages, one per basis function.
    pub fn greville(&self) -> Vec<f64> {
        let p = self.degree;
        if p == 0 {
            return (0..self.dim())
                .map(|i| 0.5 * (self.knots[i] + self.knots[i + 1]))
                .collect();
        }
        (0..self.dim())
            .map(|i| self.knots[i + 1..=i + p].iter().sum::<f64>() / p as f64)
            .collect()
    }

    pub fn find_span(&self, t: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain { value: t });
        }
        Ok(self.span_unchecked(t))
    }

    fn span_unchecked(&self, t: f64) -> usize {
        let n = self.dim();
        if t >= self.knots[n] {
            // right endpoint: last non-empty span
            let mut i = n - 1;
            while self.knots[i] == self.knots[i + 1] {
                i -= 1;
            }
            return i;
        }
        // largest i with knots[i] <= t, restricted to [p, n-1]
        let p = self.degree;
        let slice = &self.knots[p..=n];
        let pos = slice.partition_point(|&k| k <= t);
        (p + pos - 1).min(n - 1)
    }

    /// Values and the first `nderiv` derivatives of the non-vanishing basis
    /// functions at `t`. Rows above the degree are exact zeros.
    pub fn eval_basis(&self, t: f64, nderiv: usize) -> Result<BasisEvaluation> {
        let span = self.find_span(t)?;
        Ok(self.eval_at_span(span, t, nderiv))
    }

    /// Same as [`eval_basis`](Self::eval_basis) with a known span; `t` may lie
    /// anywhere in the closure of the span.
    pub fn eval_at_span(&self, span: usize, t: f64, nderiv: usize) -> BasisEvaluation {
        let p = self.degree;
        let u = &self.knots;
        let mut ndu = vec![vec![0.0; p + 1]; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        ndu[0][0] = 1.0;
        for j in 1..=p {
            left[j] = t - u[span + 1 - j];
            right[j] = u[span + j] - t;
            let mut saved = 0.0;
            for r in 0..j {
                ndu[j][r] = right[r + 1] + left[j - r];
                let temp = ndu[r][j - 1] / ndu[j][r];
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }

        let mut ders = vec![vec![0.0; p + 1]; nderiv + 1];
        for j in 0..=p {
            ders[0][j] = ndu[j][p];
        }
        let kmax = nderiv.min(p);
        let mut a = vec![vec![0.0; p + 1]; 2];
        for r in 0..=p {
            let (mut s1, mut s2) = (0usize, 1usize);
            a[0][0] = 1.0;
            for k in 1..=kmax {
                let mut d = 0.0;
                let rk = r as isize - k as isize;
                let pk = p - k;
                if r >= k {
                    a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                    d = a[s2][0] * ndu[rk as usize][pk];
                }
                let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
                let j2 = if r <= pk { k - 1 } else { p - r };
                for j in j1..=j2 {
                    let idx = (rk + j as isize) as usize;
                    a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                    d += a[s2][j] * ndu[idx][pk];
                }
                if r <= pk {
                    a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                    d += a[s2][k] * ndu[r][pk];
                }
                ders[k][r] = d;
                std::mem::swap(&mut s1, &mut s2);
            }
        }
        let mut factor = p as f64;
        for k in 1..=kmax {
            for v in &mut ders[k] {
                *v *= factor;
            }
            factor *= (p - k) as f64;
        }
        BasisEvaluation {
            span,
            first: span - p,
            ders,
        }
    }

    /// Evaluates the spline `Σ c_i B_i` at `t`.
    pub fn eval_spline(&self, coeffs: &[f64], t: f64) -> Result<f64> {
        self.eval_spline_derivative(coeffs, t, 0)
    }

    pub fn eval_spline_derivative(&self, coeffs: &[f64], t: f64, order: usize) -> Result<f64> {
        if coeffs.len() != self.dim() {
            return Err(Error::Precondition(format!(
                "{} coefficients for a space of dimension {}",
                coeffs.len(),
                self.dim()
            )));
        }
        let ev = self.eval_basis(t, order)?;
        Ok(ev
            .indices()
            .zip(ev.derivative(order))
            .map(|(i, b)| coeffs[i] * b)
            .sum())
    }

    /// Boehm knot insertion for scalar coefficients.
    pub fn insert_knot(&self, coeffs: &[f64], t: f64) -> Result<(KnotVector, Vec<f64>)> {
        self.insert_knot_with(coeffs, t)
    }

    /// Boehm knot insertion for any coefficient type forming a vector space
    /// over `f64` (points, homogeneous points, ...).
    pub fn insert_knot_with<T>(&self, coeffs: &[T], t: f64) -> Result<(KnotVector, Vec<T>)>
    where
        T: Copy + Add<Output = T> + Mul<f64, Output = T>,
    {
        if coeffs.len() != self.dim() {
            return Err(Error::Precondition(format!(
                "{} coefficients for a space of dimension {}",
                coeffs.len(),
                self.dim()
            )));
        }
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Domain { value: t });
        }
        let p = self.degree;
        let existing = self
            .knots
            .iter()
            .filter(|&&k| (k - t).abs() < KNOT_SNAP)
            .count();
        if existing + 1 > p {
            return Err(Error::MultiplicityExceeded { knot: t, max: p });
        }
        let t = self
            .knots
            .iter()
            .copied()
            .find(|&k| (k - t).abs() < KNOT_SNAP)
            .unwrap_or(t);
        let k = self.span_unchecked(t);
        let n = self.dim();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let q = if i + p <= k {
                coeffs[i]
            } else if i > k {
                coeffs[i - 1]
            } else {
                let a = (t - self.knots[i]) / (self.knots[i + p] - self.knots[i]);
                coeffs[i] * a + coeffs[i - 1] * (1.0 - a)
            };
            out.push(q);
        }
        let mut knots = self.knots.clone();
        knots.insert(k + 1, t);
        Ok((KnotVector { degree: p, knots }, out))
    }

    /// Midpoints of all non-empty spans.
    pub fn midpoints(&self) -> Vec<f64> {
        self.elements()
            .iter()
            .map(|(_, a, b)| 0.5 * (a + b))
            .collect()
    }

    /// Bisects every non-empty span `levels` times.
    pub fn uniform_refine(&self, levels: usize) -> KnotVector {
        let mut kv = self.clone();
        for _ in 0..levels {
            let mids = kv.midpoints();
            let mut knots = kv.knots.clone();
            knots.extend(mids);
            knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
            kv = KnotVector {
                degree: kv.degree,
                knots,
            };
        }
        kv
    }

    /// Removes the first and last `k` knots, giving the open knot vector of
    /// degree `p - k` on the same breakpoints. Requires every interior
    /// breakpoint to have multiplicity at most `p - k + 1`.
    pub fn trim(&self, k: usize) -> Result<KnotVector> {
        let p = self.degree;
        if k == 0 {
            return Ok(self.clone());
        }
        if p < k {
            return Err(Error::Precondition(format!(
                "cannot drop {k} degrees from degree {p}"
            )));
        }
        let breaks = self.breakpoints();
        let mults = self.multiplicities();
        for j in 1..breaks.len() - 1 {
            if mults[j] > p - k + 1 {
                return Err(Error::Precondition(format!(
                    "breakpoint {} has multiplicity {} > {}: spline space not C^{}",
                    breaks[j],
                    mults[j],
                    p - k + 1,
                    k - 1
                )));
            }
        }
        let knots = self.knots[k..self.knots.len() - k].to_vec();
        KnotVector::new(p - k, knots)
    }

    /// Knot vector of the degree-elevated space: degree `p + 1`, every
    /// breakpoint multiplicity increased by one (continuity preserved).
    pub fn elevated(&self) -> KnotVector {
        let mut knots = Vec::with_capacity(self.knots.len() + self.breakpoints().len());
        let breaks = self.breakpoints();
        let mults = self.multiplicities();
        for (z, m) in breaks.iter().zip(mults) {
            knots.extend(std::iter::repeat_n(*z, m + 1));
        }
        KnotVector {
            degree: self.degree + 1,
            knots,
        }
    }

    /// Collocation matrix `B_j(sites[i])`.
    pub fn collocation(&self, sites: &[f64]) -> Result<DenseMatrix> {
        let mut m = DenseMatrix::zeros(sites.len(), self.dim());
        for (r, &s) in sites.iter().enumerate() {
            let ev = self.eval_basis(s, 0)?;
            for (j, v) in ev.indices().zip(ev.values()) {
                m[(r, j)] = *v;
            }
        }
        Ok(m)
    }

    /// Coefficients of the spline interpolating `f` at the Greville points.
    pub fn interpolate(&self, f: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
        let sites = self.greville();
        let rhs: Vec<f64> = sites.iter().map(|&s| f(s)).collect();
        self.collocation(&sites)?.solve(&rhs)
    }

    /// Interior knots of `self` that are missing from `coarse`, assuming the
    /// breakpoints of `coarse` are a subset.
    pub fn knots_not_in(&self, coarse: &KnotVector) -> Vec<f64> {
        let mut out = Vec::new();
        let mut j = 0;
        let c = &coarse.knots;
        for &k in &self.knots {
            if j < c.len() && c[j] == k {
                j += 1;
            } else {
                out.push(k);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn kv(p: usize, k: &[f64]) -> KnotVector {
        KnotVector::new(p, k.to_vec()).unwrap()
    }

    #[test]
    fn span_lookup() {
        let k = kv(2, &[0., 0., 0., 0.5, 1., 1., 1.]);
        assert_eq!(k.find_span(0.25).unwrap(), 2);
        assert_eq!(k.find_span(0.5).unwrap(), 3);
        assert_eq!(k.find_span(1.0).unwrap(), 3);
        assert_eq!(k.find_span(0.0).unwrap(), 2);
        assert!(matches!(k.find_span(1.5), Err(Error::Domain { .. })));
        assert!(k.find_span(-1e-3).is_err());
    }

    #[test]
    fn span_matches_linear_scan() {
        let k = KnotVector::uniform(3, 9);
        let t = 0.37;
        let scan = (0..k.knots().len() - 1)
            .rfind(|&i| k.knots()[i] <= t && t < k.knots()[i + 1])
            .unwrap();
        assert_eq!(k.find_span(t).unwrap(), scan);
    }

    #[test]
    fn validation() {
        assert!(KnotVector::new(2, vec![0., 0., 1., 1.]).is_err());
        assert!(KnotVector::new(1, vec![0., 0., 0.5, 0.5, 1., 1.]).is_err());
        assert!(KnotVector::new(2, vec![0., 0., 0., 0.5, 0.4, 1., 1., 1.]).is_err());
        assert!(KnotVector::new(1, vec![0., 0., 0.5, 1., 1.]).is_ok());
        // snapping merges near-duplicate knots
        let k = KnotVector::new(2, vec![0., 0., 0., 0.5, 0.5 + 1e-14, 1., 1., 1.]).unwrap();
        assert_eq!(k.multiplicities(), vec![3, 2, 3]);
    }

    #[test]
    fn hat_and_bernstein_values() {
        let k = kv(1, &[0., 0., 1., 1.]);
        let ev = k.eval_basis(0.3, 0).unwrap();
        assert_abs_diff_eq!(ev.values()[0], 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(ev.values()[1], 0.3, epsilon = 1e-15);

        let k = kv(2, &[0., 0., 0., 1., 1., 1.]);
        let ev = k.eval_basis(0.5, 0).unwrap();
        for (v, e) in ev.values().iter().zip([0.25, 0.5, 0.25]) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn derivatives_above_degree_are_zero() {
        let k = KnotVector::uniform(2, 3);
        let ev = k.eval_basis(0.4, 4).unwrap();
        assert!(ev.derivative(3).iter().all(|&v| v == 0.0));
        assert!(ev.derivative(4).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn boehm_insertion_example() {
        let k = kv(2, &[0., 0., 0., 1., 1., 1.]);
        let (k2, c) = k.insert_knot(&[1.0, 0.0, 0.0], 0.5).unwrap();
        assert_eq!(k2.knots(), &[0., 0., 0., 0.5, 1., 1., 1.]);
        for (a, b) in c.iter().zip([1.0, 0.5, 0.0, 0.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn insertion_respects_multiplicity() {
        let k = kv(2, &[0., 0., 0., 0.5, 1., 1., 1.]);
        let c = vec![0.3, -1.0, 2.0, 0.7];
        let (k2, c2) = k.insert_knot(&c, 0.5).unwrap();
        assert!(matches!(
            k2.insert_knot(&c2, 0.5),
            Err(Error::MultiplicityExceeded { .. })
        ));
        // C0 at the double knot: both one-sided limits agree
        let left = k2.eval_spline(&c2, 0.5 - 1e-13).unwrap();
        let right = k2.eval_spline(&c2, 0.5).unwrap();
        assert_abs_diff_eq!(left, right, epsilon = 1e-11);
        assert_abs_diff_eq!(right, c2[2], epsilon = 1e-14);
    }

    #[test]
    fn refinement() {
        let k = kv(1, &[0., 0., 1., 1.]).uniform_refine(1);
        assert_eq!(k.knots(), &[0., 0., 0.5, 1., 1.]);
        let k = kv(2, &[0., 0., 0., 1., 1., 1.]).uniform_refine(2);
        assert_eq!(k.breakpoints(), vec![0., 0.25, 0.5, 0.75, 1.]);
        let k = kv(3, &[0., 0., 0., 0., 0.3, 0.3, 1., 1., 1., 1.]);
        for l in 0..4 {
            assert_eq!(k.uniform_refine(l).num_elements(), 2 << l);
            assert_abs_diff_eq!(
                k.uniform_refine(l).quasi_uniformity(),
                7.0 / 3.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn trimming() {
        let k = kv(2, &[0., 0., 0., 0.5, 1., 1., 1.]);
        let t1 = k.trim(1).unwrap();
        assert_eq!(t1.degree(), 1);
        assert_eq!(t1.knots(), &[0., 0., 0.5, 1., 1.]);
        assert_eq!(t1.dim(), k.dim() - 1);
        let t2 = k.trim(2).unwrap();
        assert_eq!(t2.degree(), 0);
        assert_eq!(t2.knots(), &[0., 0.5, 1.]);
        assert_eq!(t2.dim(), k.dim() - 2);

        let doubled = kv(2, &[0., 0., 0., 0.5, 0.5, 1., 1., 1.]);
        match doubled.trim(2) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("0.5")),
            other => panic!("expected precondition error, got {other:?}"),
        }
        assert!(kv(1, &[0., 0., 1., 1.]).trim(2).is_err());
    }

    #[test]
    fn greville_and_elevation() {
        let k = kv(2, &[0., 0., 0., 0.5, 1., 1., 1.]);
        assert_eq!(k.greville(), vec![0.0, 0.25, 0.75, 1.0]);
        let e = k.elevated();
        assert_eq!(e.degree(), 3);
        assert_eq!(e.knots(), &[0., 0., 0., 0., 0.5, 0.5, 1., 1., 1., 1.]);
    }
}

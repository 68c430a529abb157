use super::Polynomial;
use crate::scalar::Scalar;

const NEWTON_CUTOFF: usize = 64;

/// Remainder of `a` modulo the monic polynomial `m`.
pub fn poly_rem<T: Scalar>(a: &Polynomial<T>, m: &Polynomial<T>) -> Polynomial<T> {
    let (Some(da), Some(dm)) = (a.degree(), m.degree()) else {
        return a.clone();
    };
    if da < dm {
        return a.clone();
    }
    if dm == 0 {
        return Polynomial::zero();
    }
    if dm >= NEWTON_CUTOFF && da - dm >= NEWTON_CUTOFF {
        rem_newton(a, m)
    } else {
        rem_long(a, m)
    }
}

fn rem_long<T: Scalar>(a: &Polynomial<T>, m: &Polynomial<T>) -> Polynomial<T> {
    let mc = m.coeffs();
    let dm = mc.len() - 1;
    let mut r = a.coeffs().to_vec();
    for top in (dm..r.len()).rev() {
        let lead = r[top].clone();
        if lead.is_zero() {
            continue;
        }
        for (k, c) in mc.iter().enumerate() {
            let idx = top - dm + k;
            r[idx] -= lead.clone() * c;
        }
    }
    r.truncate(dm);
    Polynomial::new(r)
}

fn truncate<T: Scalar>(mut v: Vec<T>, n: usize) -> Vec<T> {
    v.truncate(n);
    v
}

/// Power series inverse of `f` modulo `x^k`, where `f(0) = 1`.
fn series_inverse<T: Scalar>(f: &[T], k: usize) -> Vec<T> {
    let mut g = vec![T::one()];
    let mut prec = 1;
    while prec < k {
        let next = (2 * prec).min(k);
        let fg = truncate(T::poly_mul(&f[..next.min(f.len())], &g), next);
        let mut e: Vec<T> = fg.into_iter().map(|v| -v).collect();
        e.resize(next, T::zero());
        e[0] += T::one();
        let corr = truncate(T::poly_mul(&g, &e), next);
        g.resize(next, T::zero());
        for (gi, ci) in g.iter_mut().zip(corr) {
            *gi += ci;
        }
        prec = next;
    }
    g
}

fn rem_newton<T: Scalar>(a: &Polynomial<T>, m: &Polynomial<T>) -> Polynomial<T> {
    let ac = a.coeffs();
    let mc = m.coeffs();
    let da = ac.len() - 1;
    let dm = mc.len() - 1;
    let qlen = da - dm + 1;
    let rev_a: Vec<T> = ac.iter().rev().take(qlen).cloned().collect();
    let rev_m: Vec<T> = mc.iter().rev().cloned().collect();
    let inv = series_inverse(&rev_m, qlen);
    let mut q = truncate(T::poly_mul(&rev_a, &inv), qlen);
    q.resize(qlen, T::zero());
    q.reverse();
    let qm = T::poly_mul(&q, mc);
    let r: Vec<T> = ac[..dm]
        .iter()
        .zip(&qm)
        .map(|(x, y)| x.clone() - y)
        .collect();
    Polynomial::new(r)
}

/// `p(x_j)` for all points through the subproduct tree and remainder descent.
pub fn multipoint_eval_subproduct<T: Scalar>(p: &Polynomial<T>, points: &[T]) -> Vec<T> {
    if points.is_empty() {
        return Vec::new();
    }
    if p.is_zero() {
        return vec![T::zero(); points.len()];
    }
    // levels[0] are the leaves (x - x_j); the last level is the root.
    let mut levels: Vec<Vec<Polynomial<T>>> = vec![points
        .iter()
        .map(|x| Polynomial::new(vec![-x.clone(), T::one()]))
        .collect()];
    while levels.last().unwrap().len() > 1 {
        let prev = levels.last().unwrap();
        let next: Vec<Polynomial<T>> = prev
            .chunks(2)
            .map(|c| if c.len() == 2 { c[0].mul(&c[1]) } else { c[0].clone() })
            .collect();
        levels.push(next);
    }
    let mut rems = vec![poly_rem(p, &levels.last().unwrap()[0])];
    for level in levels.iter().rev().skip(1) {
        let mut next = Vec::with_capacity(level.len());
        for (i, m) in level.iter().enumerate() {
            next.push(poly_rem(&rems[i / 2], m));
        }
        rems = next;
    }
    rems.into_iter()
        .map(|r| r.coeffs().first().cloned().unwrap_or_else(T::zero))
        .collect()
}

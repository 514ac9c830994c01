//! Derivative-free scalar searches used by the scans.

/// Result of a bracketing search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Bisects `f` on `[lo, hi]` until the bracket is narrower than `tol`.
///
/// Returns `None` when `f(lo)` and `f(hi)` have the same strict sign. An
/// endpoint where `f` vanishes exactly is returned as is.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Option<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    // 200 halvings exhaust f64 resolution on any finite bracket.
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`.
///
/// Returns `(argmax, max)`; the endpoints are also considered so a monotone
/// `f` yields its boundary maximum.
pub fn golden_max<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    let candidates = [(mid, f(mid)), (c, fc), (d, fd), (lo, f(lo)), (hi, f(hi))];
    candidates.into_iter().fold(
        (mid, f64::NEG_INFINITY),
        |best, cand| if cand.1 > best.1 { cand } else { best },
    )
}

/// Golden-section search for a minimum; see [`golden_max`].
pub fn golden_min<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (x, v) = golden_max(|t| -f(t), lo, hi, tol);
    (x, -v)
}

/// `n` evenly spaced points `lo + i (hi − lo) / n` for `i in 0..n` (the
/// right end is excluded, as suits periodic domains).
pub fn periodic_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / n as f64;
    (0..n).map(move |i| lo + i as f64 * step)
}

/// `n ≥ 2` evenly spaced points covering `[lo, hi]` including both ends.
pub fn closed_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (n.max(2) - 1) as f64;
    let last = n.max(2) - 1;
    (0..=last).map(move |i| if i == last { hi } else { lo + i as f64 * step })
}

/// Maximizes `f(x, y)` over a rectangle: dense grid, then alternating
/// golden-section sweeps inside the cell around the best grid point.
///
/// `f` should return `f64::NEG_INFINITY` outside its feasible set.
pub fn maximize_2d<F>(
    mut f: F,
    x_range: (f64, f64),
    y_range: (f64, f64),
    grid: (usize, usize),
    tol: f64,
) -> ((f64, f64), f64)
where
    F: FnMut(f64, f64) -> f64,
{
    let xs: Vec<f64> = closed_grid(x_range.0, x_range.1, grid.0).collect();
    let ys: Vec<f64> = closed_grid(y_range.0, y_range.1, grid.1).collect();
    let mut best = ((xs[0], ys[0]), f64::NEG_INFINITY);
    for &x in &xs {
        for &y in &ys {
            let v = f(x, y);
            if v > best.1 {
                best = ((x, y), v);
            }
        }
    }
    let hx = (x_range.1 - x_range.0) / (grid.0.max(2) - 1) as f64;
    let hy = (y_range.1 - y_range.0) / (grid.1.max(2) - 1) as f64;
    let ((mut x, mut y), mut v) = best;
    for _ in 0..60 {
        let prev = v;
        let xl = (x - hx).max(x_range.0);
        let xh = (x + hx).min(x_range.1);
        let (nx, nv) = golden_max(|t| f(t, y), xl, xh, tol);
        if nv >= v {
            x = nx;
            v = nv;
        }
        let yl = (y - hy).max(y_range.0);
        let yh = (y + hy).min(y_range.1);
        let (ny, nv) = golden_max(|t| f(x, t), yl, yh, tol);
        if nv >= v {
            y = ny;
            v = nv;
        }
        if v - prev <= 1e-15 {
            break;
        }
    }
    ((x, y), v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn bisect_no_sign_change() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_none());
    }

    #[test]
    fn bisect_exact_endpoint() {
        assert_eq!(bisect(|x| x - 1.0, 1.0, 3.0, 1e-12), Some(1.0));
    }

    #[test]
    fn golden_finds_interior_and_boundary() {
        let (x, v) = golden_max(|t| -(t - 0.3).powi(2), 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6 && v.abs() < 1e-12);
        let (x, _) = golden_max(|t| t, 0.0, 1.0, 1e-12);
        assert_eq!(x, 1.0);
        let (x, v) = golden_min(|t| (t - 2.0).powi(2) + 1.0, 0.0, 5.0, 1e-12);
        assert!((x - 2.0).abs() < 1e-6 && (v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grids() {
        let g: Vec<f64> = closed_grid(0.0, 1.0, 5).collect();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g: Vec<f64> = periodic_grid(0.0, 1.0, 4).collect();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75]);
    }

    #[test]
    fn maximize_disk() {
        // max of x + y on the unit disk is √2 at (1/√2, 1/√2), in polar form.
        let ((t, r), v) = maximize_2d(
            |t, r| r * (t.sin() + t.cos()),
            (0.0, std::f64::consts::TAU),
            (0.0, 1.0),
            (64, 16),
            1e-12,
        );
        assert!((v - 2f64.sqrt()).abs() < 1e-12);
        assert!((t - std::f64::consts::FRAC_PI_4).abs() < 1e-5);
        assert_eq!(r, 1.0);
    }
}

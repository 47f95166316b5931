//! Small fixed-size vector helpers shared by every module.

pub type Vec2 = [f64; 2];
pub type Vec3 = [f64; 3];

#[inline]
pub fn add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn scale(a: Vec2, s: f64) -> Vec2 {
    [a[0] * s, a[1] * s]
}

#[inline]
pub fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

/// Counter-clockwise quarter turn.
#[inline]
pub fn perp(a: Vec2) -> Vec2 {
    [-a[1], a[0]]
}

#[inline]
pub fn unit_angle(theta: f64) -> Vec2 {
    [theta.cos(), theta.sin()]
}

#[inline]
pub fn lerp(a: Vec2, b: Vec2, t: f64) -> Vec2 {
    [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t]
}

/// Cubic Hermite basis evaluated at `t` in [0,1]: value of the interpolant
/// with end values `y0, y1` and end slopes `m0, m1` (slopes per unit `t`).
#[inline]
pub fn hermite(y0: f64, m0: f64, y1: f64, m1: f64, t: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * m0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * m1
}

/// Derivative of [`hermite`] with respect to `t`.
#[inline]
pub fn hermite_deriv(y0: f64, m0: f64, y1: f64, m1: f64, t: f64) -> f64 {
    let t2 = t * t;
    (6.0 * t2 - 6.0 * t) * y0
        + (3.0 * t2 - 4.0 * t + 1.0) * m0
        + (-6.0 * t2 + 6.0 * t) * y1
        + (3.0 * t2 - 2.0 * t) * m1
}

/// Interior critical points of the Hermite cubic on (0,1).
pub fn hermite_critical_points(y0: f64, m0: f64, y1: f64, m1: f64) -> ([f64; 2], usize) {
    // derivative = a t^2 + b t + c
    let a = 6.0 * y0 + 3.0 * m0 - 6.0 * y1 + 3.0 * m1;
    let b = -6.0 * y0 - 4.0 * m0 + 6.0 * y1 - 2.0 * m1;
    let c = m0;
    let mut out = [0.0; 2];
    let mut n = 0;
    let mut push = |t: f64| {
        if t > 0.0 && t < 1.0 && n < 2 {
            out[n] = t;
            n += 1;
        }
    };
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return (out, 0);
    }
    if a.abs() <= 1e-14 * scale {
        if b != 0.0 {
            push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            // numerically stable quadratic roots
            let q = -0.5 * (b + b.signum() * sq);
            let (r1, r2) = if q != 0.0 { (q / a, c / q) } else { (0.0, 0.0) };
            let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
            push(lo);
            if hi != lo {
                push(hi);
            }
        }
    }
    (out, n)
}

/// Bracketed root refinement (Brent-Dekker style bisection/secant hybrid).
pub fn brent_root<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut mflag = true;
    for _ in 0..200 {
        if fb == 0.0 || (b - a).abs() < tol {
            break;
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let (l, h) = if lo < b { (lo, b) } else { (b, lo) };
        let cond = !(s > l && s < h)
            || (mflag && (s - b).abs() >= (b - c).abs() / 2.0)
            || (!mflag && (s - b).abs() >= (c - d).abs() / 2.0)
            || (mflag && (b - c).abs() < tol)
            || (!mflag && (c - d).abs() < tol);
        if cond {
            s = (a + b) / 2.0;
            mflag = true;
        } else {
            mflag = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_reproduces_cubic() {
        // y = t^3 - t: y0=0, y1=0, m0=-1, m1=2
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            let v = hermite(0.0, -1.0, 0.0, 2.0, t);
            assert!((v - (t * t * t - t)).abs() < 1e-14);
        }
        let (cp, n) = hermite_critical_points(0.0, -1.0, 0.0, 2.0);
        assert_eq!(n, 1);
        assert!((cp[0] - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn brent_finds_cos_root() {
        let r = brent_root(|x| x.cos(), 1.0, 2.0, 1e-14);
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}

//! Dense eigendecomposition of real square matrices.
//!
//! Classic EISPACK-lineage routines: Householder tridiagonalization plus
//! implicit-shift QL for symmetric input, orthogonal Hessenberg reduction
//! plus Francis double-shift QR with eigenvector back-substitution for the
//! general case. Eigenvalues come out as (real, imaginary) pairs; for a
//! complex conjugate pair the corresponding two columns of `v` hold the real
//! and imaginary parts of one eigenvector.

use crate::matrix::Matrix;

#[derive(Debug, Clone)]
pub(crate) struct Evd {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub v: Matrix,
}

pub(crate) fn decompose(a: &Matrix) -> Evd {
    let n = a.n_rows();
    debug_assert!(a.is_square());
    if is_symmetric(a) {
        let mut v = a.clone();
        let mut d = vec![0.0; n];
        let mut e = vec![0.0; n];
        tred2(&mut v, &mut d, &mut e);
        tql2(&mut v, &mut d, &mut e);
        Evd {
            re: d,
            im: vec![0.0; n],
            v,
        }
    } else {
        let mut h = a.clone();
        let mut v = Matrix::identity(n);
        orthes(&mut h, &mut v);
        let mut d = vec![0.0; n];
        let mut e = vec![0.0; n];
        hqr2(&mut h, &mut v, &mut d, &mut e);
        Evd { re: d, im: e, v }
    }
}

fn is_symmetric(a: &Matrix) -> bool {
    let n = a.n_rows();
    let tol = 1e-12 * a.max_abs();
    for i in 0..n {
        for j in i + 1..n {
            if (a[(i, j)] - a[(j, i)]).abs() > tol {
                return false;
            }
        }
    }
    true
}

/// Householder reduction of a symmetric matrix to tridiagonal form.
fn tred2(v: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let n = v.n_rows();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for item in d.iter_mut().take(i) {
                *item /= scale;
                h += *item * *item;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = 0.0;
            }

            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in j + 1..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    let adj = f * e[k] + g * d[k];
                    v[(k, j)] -= adj;
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    // accumulate the transformations
    for i in 0..n - 1 {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    let adj = g * d[k];
                    v[(k, j)] -= adj;
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix.
fn tql2(v: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let n = v.n_rows();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            loop {
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        h = v[(k, i + 1)];
                        v[(k, i + 1)] = s * v[(k, i)] + c * h;
                        v[(k, i)] = c * v[(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

/// Orthogonal reduction to upper Hessenberg form, accumulating the
/// transformations in `v`.
fn orthes(h: &mut Matrix, v: &mut Matrix) {
    let n = h.n_rows();
    if n < 3 {
        return;
    }
    let high = n - 1;
    let mut ort = vec![0.0; n];

    for m in 1..high {
        let mut scale = 0.0;
        for i in m..=high {
            scale += h[(i, m - 1)].abs();
        }
        if scale != 0.0 {
            let mut hsum = 0.0;
            for i in (m..=high).rev() {
                ort[i] = h[(i, m - 1)] / scale;
                hsum += ort[i] * ort[i];
            }
            let mut g = hsum.sqrt();
            if ort[m] > 0.0 {
                g = -g;
            }
            hsum -= ort[m] * g;
            ort[m] -= g;

            for j in m..n {
                let mut f = 0.0;
                for i in (m..=high).rev() {
                    f += ort[i] * h[(i, j)];
                }
                f /= hsum;
                for i in m..=high {
                    let adj = f * ort[i];
                    h[(i, j)] -= adj;
                }
            }
            for i in 0..=high {
                let mut f = 0.0;
                for j in (m..=high).rev() {
                    f += ort[j] * h[(i, j)];
                }
                f /= hsum;
                for j in m..=high {
                    let adj = f * ort[j];
                    h[(i, j)] -= adj;
                }
            }
            ort[m] *= scale;
            h[(m, m - 1)] = scale * g;
        }
    }

    for m in (1..high).rev() {
        if h[(m, m - 1)] != 0.0 {
            for i in m + 1..=high {
                ort[i] = h[(i, m - 1)];
            }
            for j in m..=high {
                let mut g = 0.0;
                for i in m..=high {
                    g += ort[i] * v[(i, j)];
                }
                g = (g / ort[m]) / h[(m, m - 1)];
                for i in m..=high {
                    let adj = g * ort[i];
                    v[(i, j)] += adj;
                }
            }
        }
    }
}

/// Complex scalar division, (xr + i·xi) / (yr + i·yi).
fn cdiv(xr: f64, xi: f64, yr: f64, yi: f64) -> (f64, f64) {
    if yr.abs() > yi.abs() {
        let r = yi / yr;
        let d = yr + r * yi;
        ((xr + r * xi) / d, (xi - r * xr) / d)
    } else {
        let r = yr / yi;
        let d = yi + r * yr;
        ((r * xr + xi) / d, (r * xi - xr) / d)
    }
}

/// Francis double-shift QR on a Hessenberg matrix with accumulation of the
/// transformations and back-substitution for eigenvectors.
fn hqr2(h: &mut Matrix, v: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let nn = h.n_rows();
    let mut n = nn as isize - 1;
    let low = 0isize;
    let high = nn as isize - 1;
    let eps = f64::EPSILON;
    let mut exshift = 0.0;
    let (mut p, mut q, mut r, mut s, mut z) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut t;
    let mut w;
    let mut x;
    let mut y;

    let mut norm = 0.0;
    for i in 0..nn {
        for j in (i as isize - 1).max(0) as usize..nn {
            norm += h[(i, j)].abs();
        }
    }

    let mut iter = 0;
    while n >= low {
        // look for a single small subdiagonal element
        let mut l = n;
        while l > low {
            s = h[((l - 1) as usize, (l - 1) as usize)].abs() + h[(l as usize, l as usize)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(l as usize, (l - 1) as usize)].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // one root found
            h[(n as usize, n as usize)] += exshift;
            d[n as usize] = h[(n as usize, n as usize)];
            e[n as usize] = 0.0;
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            // two roots found
            w = h[(n as usize, (n - 1) as usize)] * h[((n - 1) as usize, n as usize)];
            p = (h[((n - 1) as usize, (n - 1) as usize)] - h[(n as usize, n as usize)]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            h[(n as usize, n as usize)] += exshift;
            h[((n - 1) as usize, (n - 1) as usize)] += exshift;
            x = h[(n as usize, n as usize)];

            if q >= 0.0 {
                // real pair
                z = if p >= 0.0 { p + z } else { p - z };
                d[(n - 1) as usize] = x + z;
                d[n as usize] = d[(n - 1) as usize];
                if z != 0.0 {
                    d[n as usize] = x - w / z;
                }
                e[(n - 1) as usize] = 0.0;
                e[n as usize] = 0.0;
                x = h[(n as usize, (n - 1) as usize)];
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = (p * p + q * q).sqrt();
                p /= r;
                q /= r;
                for j in (n - 1) as usize..nn {
                    z = h[((n - 1) as usize, j)];
                    h[((n - 1) as usize, j)] = q * z + p * h[(n as usize, j)];
                    h[(n as usize, j)] = q * h[(n as usize, j)] - p * z;
                }
                for i in 0..=n as usize {
                    z = h[(i, (n - 1) as usize)];
                    h[(i, (n - 1) as usize)] = q * z + p * h[(i, n as usize)];
                    h[(i, n as usize)] = q * h[(i, n as usize)] - p * z;
                }
                for i in low as usize..=high as usize {
                    z = v[(i, (n - 1) as usize)];
                    v[(i, (n - 1) as usize)] = q * z + p * v[(i, n as usize)];
                    v[(i, n as usize)] = q * v[(i, n as usize)] - p * z;
                }
            } else {
                // complex pair
                d[(n - 1) as usize] = x + p;
                d[n as usize] = x + p;
                e[(n - 1) as usize] = z;
                e[n as usize] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            // form shift
            x = h[(n as usize, n as usize)];
            y = 0.0;
            w = 0.0;
            if l < n {
                y = h[((n - 1) as usize, (n - 1) as usize)];
                w = h[(n as usize, (n - 1) as usize)] * h[((n - 1) as usize, n as usize)];
            }

            // exceptional shifts to knock loose a stagnant iteration
            if iter == 10 {
                exshift += x;
                for i in low..=n {
                    h[(i as usize, i as usize)] -= x;
                }
                s = h[(n as usize, (n - 1) as usize)].abs()
                    + h[((n - 1) as usize, (n - 2) as usize)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in low..=n {
                        h[(i as usize, i as usize)] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }

            iter += 1;

            // look for two consecutive small subdiagonal elements
            let mut m = n - 2;
            while m >= l {
                z = h[(m as usize, m as usize)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[((m + 1) as usize, m as usize)]
                    + h[(m as usize, (m + 1) as usize)];
                q = h[((m + 1) as usize, (m + 1) as usize)] - z - r - s;
                r = h[((m + 2) as usize, (m + 1) as usize)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[(m as usize, (m - 1) as usize)].abs() * (q.abs() + r.abs())
                    < eps
                        * (p.abs()
                            * (h[((m - 1) as usize, (m - 1) as usize)].abs()
                                + z.abs()
                                + h[((m + 1) as usize, (m + 1) as usize)].abs()))
                {
                    break;
                }
                m -= 1;
            }

            for i in m + 2..=n {
                h[(i as usize, (i - 2) as usize)] = 0.0;
                if i > m + 2 {
                    h[(i as usize, (i - 3) as usize)] = 0.0;
                }
            }

            // double QR step on rows l..n and columns m..n
            for k in m..n {
                let notlast = k != n - 1;
                if k != m {
                    p = h[(k as usize, (k - 1) as usize)];
                    q = h[((k + 1) as usize, (k - 1) as usize)];
                    r = if notlast {
                        h[((k + 2) as usize, (k - 1) as usize)]
                    } else {
                        0.0
                    };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }

                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != m {
                        h[(k as usize, (k - 1) as usize)] = -s * x;
                    } else if l != m {
                        h[(k as usize, (k - 1) as usize)] = -h[(k as usize, (k - 1) as usize)];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    // row modification
                    for j in k as usize..nn {
                        p = h[(k as usize, j)] + q * h[((k + 1) as usize, j)];
                        if notlast {
                            p += r * h[((k + 2) as usize, j)];
                            h[((k + 2) as usize, j)] -= p * z;
                        }
                        h[(k as usize, j)] -= p * x;
                        h[((k + 1) as usize, j)] -= p * y;
                    }

                    // column modification
                    for i in 0..=n.min(k + 3) as usize {
                        p = x * h[(i, k as usize)] + y * h[(i, (k + 1) as usize)];
                        if notlast {
                            p += z * h[(i, (k + 2) as usize)];
                            h[(i, (k + 2) as usize)] -= p * r;
                        }
                        h[(i, k as usize)] -= p;
                        h[(i, (k + 1) as usize)] -= p * q;
                    }

                    // accumulate transformations
                    for i in low as usize..=high as usize {
                        p = x * v[(i, k as usize)] + y * v[(i, (k + 1) as usize)];
                        if notlast {
                            p += z * v[(i, (k + 2) as usize)];
                            v[(i, (k + 2) as usize)] -= p * r;
                        }
                        v[(i, k as usize)] -= p;
                        v[(i, (k + 1) as usize)] -= p * q;
                    }
                }
            }
        }
    }

    // back-substitute to find vectors of the upper triangular form
    if norm == 0.0 {
        return;
    }

    for n in (0..nn as isize).rev() {
        p = d[n as usize];
        q = e[n as usize];

        if q == 0.0 {
            // real vector
            let mut l = n;
            h[(n as usize, n as usize)] = 1.0;
            for i in (0..n).rev() {
                w = h[(i as usize, i as usize)] - p;
                r = 0.0;
                for j in l..=n {
                    r += h[(i as usize, j as usize)] * h[(j as usize, n as usize)];
                }
                if e[i as usize] < 0.0 {
                    z = w;
                    s = r;
                } else {
                    l = i;
                    if e[i as usize] == 0.0 {
                        h[(i as usize, n as usize)] =
                            if w != 0.0 { -r / w } else { -r / (eps * norm) };
                    } else {
                        // solve the 2x2 real block
                        x = h[(i as usize, (i + 1) as usize)];
                        y = h[((i + 1) as usize, i as usize)];
                        q = (d[i as usize] - p) * (d[i as usize] - p)
                            + e[i as usize] * e[i as usize];
                        t = (x * s - z * r) / q;
                        h[(i as usize, n as usize)] = t;
                        h[((i + 1) as usize, n as usize)] = if x.abs() > z.abs() {
                            (-r - w * t) / x
                        } else {
                            (-s - y * t) / z
                        };
                    }

                    // overflow control
                    t = h[(i as usize, n as usize)].abs();
                    if (eps * t) * t > 1.0 {
                        for j in i..=n {
                            h[(j as usize, n as usize)] /= t;
                        }
                    }
                }
            }
        } else if q < 0.0 {
            // complex vector
            let mut l = n - 1;

            if h[(n as usize, (n - 1) as usize)].abs() > h[((n - 1) as usize, n as usize)].abs() {
                h[((n - 1) as usize, (n - 1) as usize)] = q / h[(n as usize, (n - 1) as usize)];
                h[((n - 1) as usize, n as usize)] =
                    -(h[(n as usize, n as usize)] - p) / h[(n as usize, (n - 1) as usize)];
            } else {
                let (cr, ci) = cdiv(
                    0.0,
                    -h[((n - 1) as usize, n as usize)],
                    h[((n - 1) as usize, (n - 1) as usize)] - p,
                    q,
                );
                h[((n - 1) as usize, (n - 1) as usize)] = cr;
                h[((n - 1) as usize, n as usize)] = ci;
            }
            h[(n as usize, (n - 1) as usize)] = 0.0;
            h[(n as usize, n as usize)] = 1.0;
            for i in (0..n - 1).rev() {
                let mut ra = 0.0;
                let mut sa = 0.0;
                let mut vr;
                let vi;
                for j in l..=n {
                    ra += h[(i as usize, j as usize)] * h[(j as usize, (n - 1) as usize)];
                    sa += h[(i as usize, j as usize)] * h[(j as usize, n as usize)];
                }
                w = h[(i as usize, i as usize)] - p;

                if e[i as usize] < 0.0 {
                    z = w;
                    r = ra;
                    s = sa;
                } else {
                    l = i;
                    if e[i as usize] == 0.0 {
                        let (cr, ci) = cdiv(-ra, -sa, w, q);
                        h[(i as usize, (n - 1) as usize)] = cr;
                        h[(i as usize, n as usize)] = ci;
                    } else {
                        // solve the complex 2x2 block
                        x = h[(i as usize, (i + 1) as usize)];
                        y = h[((i + 1) as usize, i as usize)];
                        vr = (d[i as usize] - p) * (d[i as usize] - p)
                            + e[i as usize] * e[i as usize]
                            - q * q;
                        vi = (d[i as usize] - p) * 2.0 * q;
                        if vr == 0.0 && vi == 0.0 {
                            vr = eps * norm * (w.abs() + q.abs() + x.abs() + y.abs() + z.abs());
                        }
                        let (cr, ci) =
                            cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
                        h[(i as usize, (n - 1) as usize)] = cr;
                        h[(i as usize, n as usize)] = ci;
                        if x.abs() > z.abs() + q.abs() {
                            h[((i + 1) as usize, (n - 1) as usize)] = (-ra
                                - w * h[(i as usize, (n - 1) as usize)]
                                + q * h[(i as usize, n as usize)])
                                / x;
                            h[((i + 1) as usize, n as usize)] = (-sa
                                - w * h[(i as usize, n as usize)]
                                - q * h[(i as usize, (n - 1) as usize)])
                                / x;
                        } else {
                            let (cr, ci) = cdiv(
                                -r - y * h[(i as usize, (n - 1) as usize)],
                                -s - y * h[(i as usize, n as usize)],
                                z,
                                q,
                            );
                            h[((i + 1) as usize, (n - 1) as usize)] = cr;
                            h[((i + 1) as usize, n as usize)] = ci;
                        }
                    }

                    // overflow control
                    t = h[(i as usize, (n - 1) as usize)]
                        .abs()
                        .max(h[(i as usize, n as usize)].abs());
                    if (eps * t) * t > 1.0 {
                        for j in i..=n {
                            h[(j as usize, (n - 1) as usize)] /= t;
                            h[(j as usize, n as usize)] /= t;
                        }
                    }
                }
            }
        }
    }

    // multiply by the accumulated transformations to get eigenvectors of the
    // original matrix
    for j in (0..nn).rev() {
        for i in 0..nn {
            z = 0.0;
            for k in 0..=j {
                z += v[(i, k)] * h[(k, j)];
            }
            v[(i, j)] = z;
        }
    }
}

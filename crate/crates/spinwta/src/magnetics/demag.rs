//! Demagnetizing factors of a uniformly magnetized rectangular prism.
//!
//! Computed once per geometry from the magnetostatic self-energy of the
//! charged-face model. For magnetization along z the energy reduces to the
//! interaction of the two a x b faces with themselves and each other,
//!
//! `N_z = (W(0) - W(t)) / (2*pi*V)`,
//!
//! where `W(h)` is the double-rectangle Coulomb integral at face separation
//! `h`, evaluated in closed form below. The x and y factors follow by
//! permuting the dimensions; the three factors sum to exactly 1.

/// Demagnetizing factors `(Nx, Ny, Nz)` of a prism with edge lengths
/// `(lx, ly, lz)` along the coordinate axes.
pub fn prism_demag_factors(lx: f64, ly: f64, lz: f64) -> (f64, f64, f64) {
    assert!(lx > 0.0 && ly > 0.0 && lz > 0.0, "prism dimensions must be positive");
    let nz = axis_factor(lx, ly, lz);
    let nx = axis_factor(ly, lz, lx);
    let ny = axis_factor(lz, lx, ly);
    (nx, ny, nz)
}

/// Demagnetizing factor along the third dimension of an `a x b x t` prism.
fn axis_factor(a: f64, b: f64, t: f64) -> f64 {
    let volume = a * b * t;
    (face_integral(a, b, 0.0) - face_integral(a, b, t)) / (2.0 * std::f64::consts::PI * volume)
}

/// `W(h) = 4 * int_0^a int_0^b (a-u)(b-v) / sqrt(u^2 + v^2 + h^2) du dv`,
/// the Coulomb interaction of two coaxial a x b rectangles at separation h
/// (self-interaction for h = 0).
fn face_integral(a: f64, b: f64, h: f64) -> f64 {
    let f = |u: f64, v: f64| {
        let (i1, i2, i3, i4) = antiderivatives(u, v, h);
        a * b * i1 - b * i2 - a * i3 + i4
    };
    4.0 * (f(a, b) - f(a, 0.0) - f(0.0, b) + f(0.0, 0.0))
}

/// Mixed antiderivatives at `(u, v)` of `1/r`, `u/r`, `v/r` and `uv/r` with
/// `r = sqrt(u^2 + v^2 + h^2)`. Guards keep the `0 * asinh(inf)` corners
/// finite.
fn antiderivatives(u: f64, v: f64, h: f64) -> (f64, f64, f64, f64) {
    let r = (u * u + v * v + h * h).sqrt();
    let su = (v * v + h * h).sqrt(); // appears under u-direction asinh
    let sv = (u * u + h * h).sqrt();

    let asinh_u = if su > 0.0 { (u / su).asinh() } else { 0.0 };
    let asinh_v = if sv > 0.0 { (v / sv).asinh() } else { 0.0 };

    let mut i1 = v * asinh_u + u * asinh_v;
    if h > 0.0 {
        i1 -= h * (u * v).atan2(h * r);
    }
    let i2 = 0.5 * (v * r + (u * u + h * h) * asinh_v);
    let i3 = 0.5 * (u * r + (v * v + h * h) * asinh_u);
    let i4 = r * r * r / 3.0;
    (i1, i2, i3, i4)
}

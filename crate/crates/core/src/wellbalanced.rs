//! Equilibrium variables, the steady-state indicator and the convex blending
//! between a well-balanced flux/source pair and the high-order scheme.
//!
//! Interface routines work in the edge-normal frame: a state is
//! `(h, q_n, q_t)` with `q_n` the discharge along the edge normal.

/// Threshold inside the desingularized inverse depth.
pub const VEL_EPS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    X,
    Y,
}

impl Direction {
    /// Rotate a state or flux from the global frame into the edge frame.
    #[inline]
    pub fn to_normal(self, u: [f64; 3]) -> [f64; 3] {
        match self {
            Direction::X => u,
            Direction::Y => [u[0], u[2], u[1]],
        }
    }

    /// Inverse of `to_normal` (the swap is an involution).
    #[inline]
    pub fn from_normal(self, u: [f64; 3]) -> [f64; 3] {
        self.to_normal(u)
    }
}

/// `1/h` replaced by `2h / (h^2 + max(h^2, eps))`.
#[inline]
pub fn inv_depth(h: f64) -> f64 {
    let h2 = h * h;
    2.0 * h / (h2 + h2.max(VEL_EPS))
}

#[inline]
pub fn velocity(h: f64, q: f64) -> f64 {
    q * inv_depth(h)
}

/// Physical flux along the normal.
#[inline]
pub fn physical_flux(u: [f64; 3], g: f64) -> [f64; 3] {
    let un = velocity(u[0], u[1]);
    [u[1], u[1] * un + 0.5 * g * u[0] * u[0], u[2] * un]
}

#[inline]
pub fn wave_speed(u: [f64; 3], g: f64) -> f64 {
    velocity(u[0], u[1]).abs() + (g * u[0].max(0.0)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumPair {
    pub q_s: f64,
    pub head: f64,
}

pub fn equilibrium_vars(h: f64, q_s: f64, b: f64, g: f64) -> EquilibriumPair {
    let u = velocity(h, q_s);
    EquilibriumPair { q_s, head: 0.5 * u * u + g * (h + b) }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WBParams {
    pub theta_floor: f64,
    pub c_min: f64,
    pub cap_ratio: f64,
    pub s_floor: f64,
    /// Depth at or below which a side counts as dry.
    pub dry_tol: f64,
    pub exponent: i32,
    /// Jumps below this fraction of the equilibrium-variable magnitude are
    /// round-off and count as zero.
    pub eps_rel: f64,
}

impl Default for WBParams {
    fn default() -> Self {
        WBParams { theta_floor: 1e-10, c_min: 1e-14, cap_ratio: 1.0, s_floor: 1e-8, dry_tol: 1e-10, exponent: 5, eps_rel: 1e-12 }
    }
}

/// Bed elevations seen by an interface. A dry side next to a wet one
/// cannot sit above the wet free surface.
#[inline]
pub fn effective_bathymetry(hl: f64, bl: f64, hr: f64, br: f64, dry_tol: f64) -> (f64, f64) {
    let (dl, dr) = (hl <= dry_tol, hr <= dry_tol);
    match (dl, dr) {
        (true, false) => (bl.min(hr + br), br),
        (false, true) => (bl, br.min(hl + bl)),
        _ => (bl, br),
    }
}

/// Norm of the jump in equilibrium variables between two cell averages.
pub fn equilibrium_jump(ul: [f64; 3], ur: [f64; 3], bl: f64, br: f64, g: f64, params: &WBParams) -> f64 {
    if ul[0] <= params.dry_tol && ur[0] <= params.dry_tol {
        return 0.0;
    }
    let (bl, br) = effective_bathymetry(ul[0], bl, ur[0], br, params.dry_tol);
    let el = equilibrium_vars(ul[0], ul[1], bl, g);
    let er = equilibrium_vars(ur[0], ur[1], br, g);
    let eps = (er.q_s - el.q_s).hypot(er.head - el.head);
    let scale = el.q_s.abs().max(er.q_s.abs()).max(el.head.abs()).max(er.head.abs());
    if eps <= params.eps_rel * scale {
        0.0
    } else {
        eps
    }
}

/// Blending coefficient of one edge. `cl`, `cr` are the previous-step time
/// residuals of the two cells (normal frame not required: only the norm of
/// their mean is used).
#[allow(clippy::too_many_arguments)]
pub fn steady_indicator(
    ul: [f64; 3],
    ur: [f64; 3],
    bl: f64,
    br: f64,
    cl: [f64; 3],
    cr: [f64; 3],
    dx: f64,
    g: f64,
    params: &WBParams,
) -> f64 {
    let eps = equilibrium_jump(ul, ur, bl, br, g, params);
    let c = [0.5 * (cl[0] + cr[0]), 0.5 * (cl[1] + cr[1]), 0.5 * (cl[2] + cr[2])];
    let c = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt().max(params.c_min);
    indicator_from(eps, c, dx, params)
}

#[inline]
pub fn indicator_from(eps: f64, c: f64, dx: f64, params: &WBParams) -> f64 {
    if eps == 0.0 {
        return 0.0;
    }
    let th = eps / (eps + (dx / c).powi(params.exponent));
    if th < params.theta_floor {
        0.0
    } else {
        th
    }
}

#[inline]
pub fn blend_reconstruction(avg: [f64; 3], ho: [f64; 3], theta: f64) -> [f64; 3] {
    [
        (1.0 - theta) * avg[0] + theta * ho[0],
        (1.0 - theta) * avg[1] + theta * ho[1],
        (1.0 - theta) * avg[2] + theta * ho[2],
    ]
}

/// Local Lax-Friedrichs flux.
pub fn lf_flux(ul: [f64; 3], ur: [f64; 3], g: f64) -> [f64; 3] {
    let fl = physical_flux(ul, g);
    let fr = physical_flux(ur, g);
    let s = wave_speed(ul, g).max(wave_speed(ur, g));
    [
        0.5 * (fl[0] + fr[0]) - 0.5 * s * (ur[0] - ul[0]),
        0.5 * (fl[1] + fr[1]) - 0.5 * s * (ur[1] - ul[1]),
        0.5 * (fl[2] + fr[2]) - 0.5 * s * (ur[2] - ul[2]),
    ]
}

/// Interface source integrated over the cell width, i.e. `s * dx`.
pub fn wb_source_interface(ul: [f64; 3], ur: [f64; 3], bl: f64, br: f64, g: f64, params: &WBParams) -> f64 {
    let (hl, hr) = (ul[0], ur[0]);
    let (dl, dr) = (hl <= params.dry_tol, hr <= params.dry_tol);
    if dl && dr {
        return 0.0;
    }
    let (bl, br) = effective_bathymetry(hl, bl, hr, br, params.dry_tol);
    let db = br - bl;
    let hs = hl + hr;
    if dl || dr {
        return -g * 0.5 * hs * db;
    }
    let main = -g * (2.0 * hl * hr / hs) * db;
    let dh = hr - hl;
    let cap = params.cap_ratio * g * 0.5 * hs * db.abs();
    main + (g * dh * dh * dh / (2.0 * hs)).clamp(-cap, cap)
}

/// Well-balanced two-wave flux with the interface source built into the
/// momentum jump. Returns the flux and `s * dx`.
pub fn wb_flux(ul: [f64; 3], ur: [f64; 3], bl: f64, br: f64, g: f64, params: &WBParams) -> ([f64; 3], f64) {
    let sdx = wb_source_interface(ul, ur, bl, br, g, params);
    let (hl, ql, tl) = (ul[0], ul[1], ul[2]);
    let (hr, qr, tr) = (ur[0], ur[1], ur[2]);
    let fl = physical_flux(ul, g);
    let fr = physical_flux(ur, g);
    let lam = wave_speed(ul, g).max(wave_speed(ur, g)).max(params.s_floor);
    let hs = hl + hr;

    let h_hll = (0.5 * hs - (qr - ql) / (2.0 * lam)).max(0.0);
    let q_star = 0.5 * (ql + qr) - (fr[1] - fl[1] - sdx) / (2.0 * lam);

    let mut jump = 0.0;
    if sdx != 0.0 && hs > 0.0 {
        let qbar = 0.5 * (ql + qr);
        let mut dnm = 0.5 * g * hs - qbar * qbar * inv_depth(hl) * inv_depth(hr);
        let floor = params.s_floor * 0.5 * g * hs;
        if dnm.abs() < floor {
            dnm = if dnm < 0.0 { -floor } else { floor };
        }
        jump = sdx / dnm;
    }
    let (mut hls, mut hrs) = (h_hll - 0.5 * jump, h_hll + 0.5 * jump);
    if hls < 0.0 {
        hls = 0.0;
        hrs = 2.0 * h_hll;
    } else if hrs < 0.0 {
        hrs = 0.0;
        hls = 2.0 * h_hll;
    }

    let fls = [fl[0] - lam * (hls - hl), fl[1] - lam * (q_star - ql)];
    let frs = [fr[0] + lam * (hrs - hr), fr[1] + lam * (q_star - qr)];
    let mass = 0.5 * (fls[0] + frs[0]);
    // transverse momentum is carried by the mass flux at the upwind velocity
    let vt = if q_star >= 0.0 { velocity(hl, tl) } else { velocity(hr, tr) };
    ([mass, 0.5 * (fls[1] + frs[1]), mass * vt], sdx)
}

#[inline]
pub fn blend_flux(theta: f64, wb: [f64; 3], lf: [f64; 3]) -> [f64; 3] {
    if theta == 0.0 {
        return wb;
    }
    if theta == 1.0 {
        return lf;
    }
    [
        (1.0 - theta) * wb[0] + theta * lf[0],
        (1.0 - theta) * wb[1] + theta * lf[1],
        (1.0 - theta) * wb[2] + theta * lf[2],
    ]
}

/// Blended cell source from the two interfaces of one sweep direction.
/// `s_minus`, `s_plus` are the interface sources (already oriented).
pub fn blend_source(theta_m: f64, theta_p: f64, s_ho: [f64; 3], s_minus: [f64; 3], s_plus: [f64; 3]) -> [f64; 3] {
    let a = 0.5 * (theta_m + theta_p);
    let (wm, wp) = (0.5 * (1.0 - theta_m), 0.5 * (1.0 - theta_p));
    [
        a * s_ho[0] + wm * s_minus[0] + wp * s_plus[0],
        a * s_ho[1] + wm * s_minus[1] + wp * s_plus[1],
        a * s_ho[2] + wm * s_minus[2] + wp * s_plus[2],
    ]
}

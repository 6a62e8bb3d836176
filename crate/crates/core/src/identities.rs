//! The named identity catalog: every verification the library performs,
//! addressable by a stable identifier, with exact residual reporting.
//!
//! Each entry maps to one operation in the construction; a run either
//! passes with zero residual or reports what failed. Checks marked exact
//! run at the symbolic level; the spectrum checks additionally take a
//! rational deformation parameter.

use num_rational::BigRational;
use num_traits::One;

use crate::coordalg::{casimir, check_central, verify_zzbar, RewriteSystem};
use crate::functionals::{coordinate_polys, FunctionalData, RelationSpan};
use crate::scalars::Scalar;
use crate::spectra;
use crate::tensors::{rank4_to_mat, yang_baxter_holds, LorentzData, Mat, Sign};

/// Stable identifiers of the verification catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[allow(non_camel_case_types)]
pub enum IdentityId {
    EPSILON_NORM,
    HECKE_SPINOR,
    RPM_INVERSE,
    YBE_SPINOR,
    COMPLETENESS,
    METRIC_VALUES,
    METRIC_INVERSE,
    METRIC_TRACE_EQUIV,
    RROWS_EQ7,
    HECKE_CUBIC,
    YBE_VECTOR,
    METRIC_SYM,
    COORD_MATCH,
    CASIMIR_CENTRAL,
    ZZBAR_39A,
    ZZBAR_39B,
    LADDER_35_36,
    CONFLUENCE_D3,
    TERMINATION,
    CAUSALITY_EQUIV,
    LIGHTCONE_STABLE,
    SO3_ORTHO,
    SPHERE_CLOSE,
}

impl IdentityId {
    pub const ALL: [IdentityId; 23] = [
        IdentityId::EPSILON_NORM,
        IdentityId::HECKE_SPINOR,
        IdentityId::RPM_INVERSE,
        IdentityId::YBE_SPINOR,
        IdentityId::COMPLETENESS,
        IdentityId::METRIC_VALUES,
        IdentityId::METRIC_INVERSE,
        IdentityId::METRIC_TRACE_EQUIV,
        IdentityId::RROWS_EQ7,
        IdentityId::HECKE_CUBIC,
        IdentityId::YBE_VECTOR,
        IdentityId::METRIC_SYM,
        IdentityId::COORD_MATCH,
        IdentityId::CASIMIR_CENTRAL,
        IdentityId::ZZBAR_39A,
        IdentityId::ZZBAR_39B,
        IdentityId::LADDER_35_36,
        IdentityId::CONFLUENCE_D3,
        IdentityId::TERMINATION,
        IdentityId::CAUSALITY_EQUIV,
        IdentityId::LIGHTCONE_STABLE,
        IdentityId::SO3_ORTHO,
        IdentityId::SPHERE_CLOSE,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::EPSILON_NORM => "EPSILON_NORM",
            IdentityId::HECKE_SPINOR => "HECKE_SPINOR",
            IdentityId::RPM_INVERSE => "RPM_INVERSE",
            IdentityId::YBE_SPINOR => "YBE_SPINOR",
            IdentityId::COMPLETENESS => "COMPLETENESS",
            IdentityId::METRIC_VALUES => "METRIC_VALUES",
            IdentityId::METRIC_INVERSE => "METRIC_INVERSE",
            IdentityId::METRIC_TRACE_EQUIV => "METRIC_TRACE_EQUIV",
            IdentityId::RROWS_EQ7 => "RROWS_EQ7",
            IdentityId::HECKE_CUBIC => "HECKE_CUBIC",
            IdentityId::YBE_VECTOR => "YBE_VECTOR",
            IdentityId::METRIC_SYM => "METRIC_SYM",
            IdentityId::COORD_MATCH => "COORD_MATCH",
            IdentityId::CASIMIR_CENTRAL => "CASIMIR_CENTRAL",
            IdentityId::ZZBAR_39A => "ZZBAR_39A",
            IdentityId::ZZBAR_39B => "ZZBAR_39B",
            IdentityId::LADDER_35_36 => "LADDER_35_36",
            IdentityId::CONFLUENCE_D3 => "CONFLUENCE_D3",
            IdentityId::TERMINATION => "TERMINATION",
            IdentityId::CAUSALITY_EQUIV => "CAUSALITY_EQUIV",
            IdentityId::LIGHTCONE_STABLE => "LIGHTCONE_STABLE",
            IdentityId::SO3_ORTHO => "SO3_ORTHO",
            IdentityId::SPHERE_CLOSE => "SPHERE_CLOSE",
        }
    }

    pub fn from_name(name: &str) -> Option<IdentityId> {
        IdentityId::ALL.iter().copied().find(|id| id.name() == name)
    }
}

/// Result of running one catalog entry.
#[derive(Clone, Debug)]
pub struct IdentityOutcome {
    pub id: IdentityId,
    pub passed: bool,
    pub residual: Option<String>,
}

impl IdentityOutcome {
    fn pass(id: IdentityId) -> IdentityOutcome {
        IdentityOutcome {
            id,
            passed: true,
            residual: None,
        }
    }

    fn fail(id: IdentityId, residual: String) -> IdentityOutcome {
        IdentityOutcome {
            id,
            passed: false,
            residual: Some(residual),
        }
    }

    fn check(id: IdentityId, ok: bool, residual: &str) -> IdentityOutcome {
        if ok {
            IdentityOutcome::pass(id)
        } else {
            IdentityOutcome::fail(id, residual.to_string())
        }
    }
}

/// Shared data for a verification run: the constants and both braiding
/// families, built once.
pub struct IdentityContext<'a> {
    pub ld: &'a LorentzData,
    pub fd: FunctionalData<'a>,
    big_r: [crate::tensors::Tensor; 2],
    /// Rational deformation parameter for the spectrum checks.
    pub q0: BigRational,
}

impl<'a> IdentityContext<'a> {
    pub fn new(ld: &'a LorentzData, q0: BigRational) -> IdentityContext<'a> {
        let fd = FunctionalData::new(ld);
        let big_r = [fd.big_r(Sign::Plus), fd.big_r(Sign::Minus)];
        IdentityContext { ld, fd, big_r, q0 }
    }

    pub fn big_r(&self, sign: Sign) -> &crate::tensors::Tensor {
        &self.big_r[sign.index()]
    }

    pub fn run_all(&self) -> Vec<IdentityOutcome> {
        IdentityId::ALL.iter().map(|&id| self.run(id)).collect()
    }

    pub fn run(&self, id: IdentityId) -> IdentityOutcome {
        match id {
            IdentityId::EPSILON_NORM => self.epsilon_norm(),
            IdentityId::HECKE_SPINOR => self.hecke_spinor(),
            IdentityId::RPM_INVERSE => self.rpm_inverse(),
            IdentityId::YBE_SPINOR => self.ybe_spinor(),
            IdentityId::COMPLETENESS => self.completeness(),
            IdentityId::METRIC_VALUES => self.metric_values(),
            IdentityId::METRIC_INVERSE => self.metric_inverse(),
            IdentityId::METRIC_TRACE_EQUIV => self.metric_trace_equiv(),
            IdentityId::RROWS_EQ7 => self.braiding_rows(),
            IdentityId::HECKE_CUBIC => self.hecke_cubic(),
            IdentityId::YBE_VECTOR => self.ybe_vector(),
            IdentityId::METRIC_SYM => self.metric_sym(),
            IdentityId::COORD_MATCH => self.coord_match(),
            IdentityId::CASIMIR_CENTRAL => self.casimir_central(),
            IdentityId::ZZBAR_39A => self.zzbar(true),
            IdentityId::ZZBAR_39B => self.zzbar(false),
            IdentityId::LADDER_35_36 => self.ladder_identity(),
            IdentityId::CONFLUENCE_D3 => self.confluence(),
            IdentityId::TERMINATION => self.termination(),
            IdentityId::CAUSALITY_EQUIV => self.causality(),
            IdentityId::LIGHTCONE_STABLE => self.lightcone(),
            IdentityId::SO3_ORTHO => self.so3(),
            IdentityId::SPHERE_CLOSE => self.sphere(),
        }
    }

    fn epsilon_norm(&self) -> IdentityOutcome {
        let ld = self.ld;
        let mut ok = true;
        for (lo, up) in [
            (&ld.eps_lo, &ld.eps_up),
            (&ld.eps_dot_lo, &ld.eps_dot_up),
        ] {
            for a in 0..2 {
                for b in 0..2 {
                    let mut acc = Scalar::zero();
                    for d in 0..2 {
                        acc = &acc + &(&lo[a][d] * &up[d][b]);
                    }
                    let expect = if a == b { Scalar::one() } else { Scalar::zero() };
                    ok &= acc == expect;
                }
            }
            let mut full = Scalar::zero();
            for a in 0..2 {
                for b in 0..2 {
                    full = &full + &(&lo[a][b] * &up[a][b]);
                }
            }
            ok &= full == -Scalar::big_q();
        }
        IdentityOutcome::check(IdentityId::EPSILON_NORM, ok, "spinor metric contraction")
    }

    fn hecke_spinor(&self) -> IdentityOutcome {
        let mut ok = true;
        for sign in [Sign::Plus, Sign::Minus] {
            let r = rank4_to_mat(&self.ld.r_spinor_tensor(sign));
            let id = Mat::identity(4);
            let a2 = Scalar::q_pow(2 * sign.exponent());
            ok &= r.add(&id.scale(&a2)).mul(&r.sub(&id)).is_zero();
        }
        IdentityOutcome::check(IdentityId::HECKE_SPINOR, ok, "quadratic Hecke condition")
    }

    fn rpm_inverse(&self) -> IdentityOutcome {
        let rp = rank4_to_mat(&self.ld.r_spinor_tensor(Sign::Plus));
        let rm = rank4_to_mat(&self.ld.r_spinor_tensor(Sign::Minus));
        let ok = rp.mul(&rm) == Mat::identity(4);
        IdentityOutcome::check(IdentityId::RPM_INVERSE, ok, "R+ R- differs from identity")
    }

    fn ybe_spinor(&self) -> IdentityOutcome {
        let ok = yang_baxter_holds(&self.ld.r_spinor_tensor(Sign::Plus), 2)
            && yang_baxter_holds(&self.ld.r_spinor_tensor(Sign::Minus), 2);
        IdentityOutcome::check(IdentityId::YBE_SPINOR, ok, "spinor braid relation")
    }

    fn completeness(&self) -> IdentityOutcome {
        let ld = self.ld;
        let mut ok = true;
        for a in 0..2 {
            for bdot in 0..2 {
                for rdot in 0..2 {
                    for s in 0..2 {
                        let mut acc = Scalar::zero();
                        for big_i in 0..4 {
                            for y in 0..2 {
                                for x in 0..2 {
                                    let term = &(&ld.eps_dot_up[bdot][y] * &ld.sigma[big_i][a][y])
                                        * &(&ld.eps_dot_lo[rdot][x]
                                            * &ld.sigma_bar_lo[Sign::Plus.index()][big_i][x][s]);
                                    acc = &acc + &term;
                                }
                            }
                        }
                        let expect = if a == s && bdot == rdot {
                            Scalar::big_q()
                        } else {
                            Scalar::zero()
                        };
                        ok &= acc == expect;
                    }
                }
            }
        }
        // trace collapses
        for n in 0..4 {
            let sb = &ld.sigma_bar_lo[Sign::Plus.index()][n];
            let mut tr = Scalar::zero();
            for r in 0..2 {
                for x in 0..2 {
                    for y in 0..2 {
                        tr = &tr + &(&(&ld.eps_dot_lo[r][x] * &sb[x][y]) * &ld.eps_lo[y][r]);
                    }
                }
            }
            let expect = if n == 0 { -Scalar::big_q() } else { Scalar::zero() };
            ok &= tr == expect;
            let mut tr2 = Scalar::zero();
            for a in 0..2 {
                for r in 0..2 {
                    for b in 0..2 {
                        tr2 = &tr2
                            + &(&(&ld.sigma[n][r][b] * &ld.eps_up[r][a]) * &ld.eps_dot_up[a][b]);
                    }
                }
            }
            let expect = if n == 0 { Scalar::big_q() } else { Scalar::zero() };
            ok &= tr2 == expect;
        }
        IdentityOutcome::check(IdentityId::COMPLETENESS, ok, "completeness relations")
    }

    fn metric_values(&self) -> IdentityOutcome {
        let g = &self.ld.g_up[Sign::Plus.index()];
        let dq = &Scalar::q_pow(1) - &Scalar::q_pow(-1);
        let g12 = &(&(-Scalar::i()) * &Scalar::q_half_pow(1)) * &(&dq / &Scalar::big_q());
        let mut ok = g.get(0, 0) == &-Scalar::q_half_pow(-3);
        for i in 1..4 {
            ok &= g.get(i, i) == &Scalar::q_half_pow(1);
        }
        ok &= g.get(1, 2) == &g12 && g.get(2, 1) == &-g12;
        for (i, j) in [
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 0),
            (2, 0),
            (3, 0),
            (1, 3),
            (3, 1),
            (2, 3),
            (3, 2),
        ] {
            ok &= g.get(i, j).is_zero();
        }
        // classical limit
        for i in 0..4 {
            for j in 0..4 {
                let v = g.get(i, j).classical_limit();
                let expect = match (i, j) {
                    (0, 0) => Scalar::from_int(-1),
                    (a, b) if a == b => Scalar::one(),
                    _ => Scalar::zero(),
                };
                ok &= matches!(v, Ok(value) if value == expect);
            }
        }
        IdentityOutcome::check(IdentityId::METRIC_VALUES, ok, "printed metric entries")
    }

    fn metric_inverse(&self) -> IdentityOutcome {
        let ld = self.ld;
        let g = &ld.g_up[Sign::Plus.index()];
        let ginv = &ld.g_lo[Sign::Plus.index()];
        let mut ok = g.mul(ginv) == Mat::identity(4) && ginv.mul(g) == Mat::identity(4);
        let dq = &Scalar::q_pow(1) - &Scalar::q_pow(-1);
        let quarter = Scalar::from_ratio(1, 4);
        let q2 = &Scalar::big_q() * &Scalar::big_q();
        let g11 = &(&Scalar::q_half_pow(-1) * &q2) * &quarter;
        let g12 = &(&(&Scalar::i() * &Scalar::q_half_pow(-1)) * &(&dq * &Scalar::big_q()))
            * &quarter;
        ok &= ginv.get(0, 0) == &-Scalar::q_half_pow(3);
        ok &= ginv.get(1, 1) == &g11 && ginv.get(2, 2) == &g11;
        ok &= ginv.get(3, 3) == &Scalar::q_half_pow(-1);
        ok &= ginv.get(1, 2) == &g12 && ginv.get(2, 1) == &-g12;
        IdentityOutcome::check(IdentityId::METRIC_INVERSE, ok, "inverse metric")
    }

    fn metric_trace_equiv(&self) -> IdentityOutcome {
        let ld = self.ld;
        let mut ok = true;
        for sign in [Sign::Plus, Sign::Minus] {
            ok &= ld.metric_second_trace(sign) == ld.g_up[sign.index()];
            ok &= ld.metric_inverse_trace(sign) == ld.g_lo[sign.index()];
        }
        IdentityOutcome::check(
            IdentityId::METRIC_TRACE_EQUIV,
            ok,
            "trace forms of the metric disagree",
        )
    }

    fn braiding_rows(&self) -> IdentityOutcome {
        let mut ok = true;
        for sign in [Sign::Plus, Sign::Minus] {
            let r = self.big_r(sign);
            for m in 0..4 {
                for n in 0..4 {
                    for p in 0..4 {
                        let expect = if n == m && p == 0 {
                            Scalar::one()
                        } else {
                            Scalar::zero()
                        };
                        ok &= r.get(&[0, m, n, p]) == &expect;
                        ok &= r.get(&[p, m, n, 0]) == &expect;
                    }
                }
            }
        }
        IdentityOutcome::check(IdentityId::RROWS_EQ7, ok, "braiding row identities")
    }

    fn hecke_cubic(&self) -> IdentityOutcome {
        let mut ok = true;
        for sign in [Sign::Plus, Sign::Minus] {
            let r = rank4_to_mat(self.big_r(sign));
            let id = Mat::identity(16);
            let h = r
                .add(&id.scale(&Scalar::q_pow(2)))
                .mul(&r.add(&id.scale(&Scalar::q_pow(-2))))
                .mul(&r.sub(&id));
            ok &= h.is_zero();
        }
        // The antipode route to the inverse closes the family.
        for sign in [Sign::Plus, Sign::Minus] {
            let r = rank4_to_mat(self.big_r(sign));
            let rinv = rank4_to_mat(&self.fd.big_r_antipode_inverse(sign));
            ok &= r.mul(&rinv) == Mat::identity(16);
        }
        IdentityOutcome::check(IdentityId::HECKE_CUBIC, ok, "cubic Hecke / inverse")
    }

    fn ybe_vector(&self) -> IdentityOutcome {
        let ok = yang_baxter_holds(self.big_r(Sign::Plus), 4)
            && yang_baxter_holds(self.big_r(Sign::Minus), 4);
        IdentityOutcome::check(IdentityId::YBE_VECTOR, ok, "vector braid relation")
    }

    fn metric_sym(&self) -> IdentityOutcome {
        let ld = self.ld;
        let mut ok = true;
        for sign in [Sign::Plus, Sign::Minus] {
            let r = self.big_r(sign);
            let g = &ld.g_up[sign.index()];
            let glo = &ld.g_lo[sign.index()];
            for n in 0..4 {
                for m in 0..4 {
                    let mut acc = Scalar::zero();
                    for k in 0..4 {
                        for l in 0..4 {
                            acc = &acc + &(r.get(&[n, m, k, l]) * g.get(k, l));
                        }
                    }
                    ok &= &acc == g.get(n, m);
                }
            }
            for k in 0..4 {
                for l in 0..4 {
                    let mut acc = Scalar::zero();
                    for n in 0..4 {
                        for m in 0..4 {
                            acc = &acc + &(r.get(&[n, m, k, l]) * glo.get(n, m));
                        }
                    }
                    ok &= &acc == glo.get(k, l);
                }
            }
        }
        IdentityOutcome::check(IdentityId::METRIC_SYM, ok, "metric symmetrization")
    }

    fn coord_match(&self) -> IdentityOutcome {
        let rels = self.fd.derive_coordinate_relations(self.big_r(Sign::Plus));
        let rs = RewriteSystem::standard();
        let mut ok = rels.iter().all(|rel| rs.normal_order(rel).is_zero());
        let span = RelationSpan::new(&rels);
        for rel in rs.relation_polys().iter().filter(|p| {
            p.terms()
                .all(|(w, _)| !w.contains(&crate::coordalg::CoordGen::Tau2))
        }) {
            ok &= span.contains(rel);
        }
        let _ = coordinate_polys();
        IdentityOutcome::check(IdentityId::COORD_MATCH, ok, "relation sets differ")
    }

    fn casimir_central(&self) -> IdentityOutcome {
        let ok = check_central(&RewriteSystem::standard(), &casimir());
        IdentityOutcome::check(IdentityId::CASIMIR_CENTRAL, ok, "commutator residual")
    }

    fn zzbar(&self, first: bool) -> IdentityOutcome {
        let report = verify_zzbar(&RewriteSystem::standard());
        let (id, residual) = if first {
            (IdentityId::ZZBAR_39A, &report.residual_a)
        } else {
            (IdentityId::ZZBAR_39B, &report.residual_b)
        };
        IdentityOutcome::check(id, residual.is_zero(), &residual.to_string())
    }

    fn ladder_identity(&self) -> IdentityOutcome {
        let ok = crate::coordalg::ladder_identity_holds(5);
        IdentityOutcome::check(IdentityId::LADDER_35_36, ok, "symbolic ladder relation")
    }

    fn confluence(&self) -> IdentityOutcome {
        let report = RewriteSystem::standard().confluence_check(3);
        IdentityOutcome::check(
            IdentityId::CONFLUENCE_D3,
            report.passed(),
            &format!("{} unresolved overlaps", report.failures.len()),
        )
    }

    fn termination(&self) -> IdentityOutcome {
        let t = BigRational::one();
        let mut ok = true;
        for twice_l in [0i64, 1, 2, 3, 4] {
            ok &= spectra::termination_check(twice_l, &self.q0, &t, None).passed();
            ok &= spectra::termination_symbolic(twice_l);
            ok &= spectra::ladder_closure_symbolic(twice_l);
        }
        IdentityOutcome::check(IdentityId::TERMINATION, ok, "spectrum termination")
    }

    fn causality(&self) -> IdentityOutcome {
        let mut ok = true;
        for qi in 0..20i64 {
            let q0 = ratio(1, 2) + ratio(3, 2) * ratio(qi, 19);
            let big_q = &q0 + q0.recip();
            let min_gsq = ratio(4, 1) / (&big_q * &big_q);
            for gi in 0..20i64 {
                let gamma_sq = &min_gsq + (ratio(4, 1) - &min_gsq) * ratio(gi, 19);
                match spectra::causality_check_exact(&gamma_sq, &q0) {
                    Ok(nonempty) => ok &= nonempty == (gamma_sq >= ratio(1, 1)),
                    Err(_) => ok = false,
                }
            }
            ok &= matches!(spectra::causality_check_exact(&ratio(1, 1), &q0), Ok(true));
        }
        IdentityOutcome::check(IdentityId::CAUSALITY_EQUIV, ok, "interval/bound mismatch")
    }

    fn lightcone(&self) -> IdentityOutcome {
        let t = BigRational::one();
        let mut ok = true;
        for q0 in [self.q0.clone(), self.q0.recip()] {
            ok &= spectra::stable_state_check(&t, &q0);
            let x0 = spectra::lightcone_spectrum_exact(0, &t, &q0);
            let expect = if q0 <= BigRational::one() {
                // the upper root q t of the degenerate interval
                &q0 * &t
            } else {
                // the upper root q^-3 t of the degenerate interval
                spectra::rational_pow(&q0, -3) * &t
            };
            ok &= x0 == expect;
        }
        IdentityOutcome::check(IdentityId::LIGHTCONE_STABLE, ok, "light-cone states")
    }

    fn so3(&self) -> IdentityOutcome {
        let report = crate::so3q::verify_so3(&self.fd);
        IdentityOutcome::check(
            IdentityId::SO3_ORTHO,
            report.passed(),
            &report.failing_lines().join("; "),
        )
    }

    fn sphere(&self) -> IdentityOutcome {
        let mut ok = true;
        for t in [Scalar::from_int(1), Scalar::from_ratio(3, 2)] {
            ok &= crate::so3q::sphere_closure(&t);
        }
        // parameter formulas at tau2 = 0 and q = 1
        let t = Scalar::from_int(2);
        let (lambda, rho) = crate::so3q::sphere_parameters(&t, &Scalar::zero());
        ok &= rho == &Scalar::q_pow(-2) * &Scalar::from_int(4);
        ok &= matches!(lambda.classical_limit(), Ok(v) if v.is_zero());
        IdentityOutcome::check(IdentityId::SPHERE_CLOSE, ok, "sphere closure")
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

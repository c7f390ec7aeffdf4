//! Operators on three-leg hom spaces hom(a1⊗a2, a3): the braiding moves Ω₀, Ω₋₁,
//! the duality moves σ₁₂₃, σ₁₃₂ and their composites Ã₀, Â₀.

use crate::category::{CategoryData, Label};
use crate::engine::{after_gen, then_gen, Generator};
use crate::error::{Error, Result};
use crate::hom::HomMorphism;

fn legs(m: &HomMorphism) -> Result<(Label, Label, Label)> {
    if m.src.len() != 2 || m.tgt.len() != 1 {
        return Err(Error::Type(format!(
            "expected a morphism a1⊗a2 -> a3, got {:?} -> {:?}",
            m.src, m.tgt
        )));
    }
    Ok((m.src[0], m.src[1], m.tgt[0]))
}

/// Ω₀(m) = m ∘ c⁻¹_{a1,a2} : a2⊗a1 → a3.
pub fn omega0(cat: &CategoryData, m: &HomMorphism) -> Result<HomMorphism> {
    let (a1, a2, _) = legs(m)?;
    after_gen(cat, m, 0, Generator::BraidInv(a2, a1))
}

/// Ω₋₁(m) = m ∘ c_{a2,a1} : a2⊗a1 → a3.
pub fn omega_minus1(cat: &CategoryData, m: &HomMorphism) -> Result<HomMorphism> {
    let (a1, a2, _) = legs(m)?;
    after_gen(cat, m, 0, Generator::Braid(a2, a1))
}

/// σ₁₂₃(m) = (e_{a3}⊗id)(id⊗m⊗id)(id⊗id⊗i_{a2}) : a3'⊗a1 → a2'.
pub fn sigma123(cat: &CategoryData, m: &HomMorphism) -> Result<HomMorphism> {
    let (a1, a2, a3) = legs(m)?;
    let start = HomMorphism::identity(cat, &[cat.dual(a3), a1]);
    let h = then_gen(cat, &start, 2, Generator::Cup(a2))?;
    let h = crate::engine::then(cat, &h, 1, m)?;
    then_gen(cat, &h, 0, Generator::Cap(a3))
}

/// σ₁₃₂(m) = (id⊗e'_{a3})(id⊗m⊗id)(i'_{a1}⊗id⊗id) : a2⊗a3' → a1'.
pub fn sigma132(cat: &CategoryData, m: &HomMorphism) -> Result<HomMorphism> {
    let (a1, a2, a3) = legs(m)?;
    let start = HomMorphism::identity(cat, &[a2, cat.dual(a3)]);
    let h = then_gen(cat, &start, 0, Generator::CupL(a1))?;
    let h = crate::engine::then(cat, &h, 1, m)?;
    then_gen(cat, &h, 1, Generator::CapL(a3))
}

/// Ã₀ = Ω₋₁ ∘ σ₁₂₃ : hom(a1⊗a2, a3) → hom(a1⊗a3', a2').
pub fn tilde_a0(cat: &CategoryData, m: &HomMorphism) -> Result<HomMorphism> {
    omega_minus1(cat, &sigma123(cat, m)?)
}

/// Â₀ = σ₁₃₂ ∘ Ω₀ : hom(a1⊗a2, a3) → hom(a1⊗a3', a2').
pub fn hat_a0(cat: &CategoryData, m: &HomMorphism) -> Result<HomMorphism> {
    sigma132(cat, &omega0(cat, m)?)
}

/// Apply a three-leg operator to every basis vertex of hom(a1⊗a2, a3) and return the
/// matrix whose column i is the image of basis vertex i in fusion coordinates.
pub fn operator_matrix(
    cat: &CategoryData,
    a1: Label,
    a2: Label,
    a3: Label,
    op: impl Fn(&CategoryData, &HomMorphism) -> Result<HomMorphism>,
) -> Result<crate::numeric::Mat> {
    let n = cat.n(a1, a2, a3);
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let v = crate::engine::generator(cat, &Generator::BasisVertex(a1, a2, a3, i))?;
        let img = op(cat, &v)?;
        cols.push(img.fusion_coords(cat).expect("three-leg image"));
    }
    let rows = cols.first().map_or(0, |c| c.len());
    Ok(crate::numeric::Mat::from_fn(rows, n, |r, c| cols[c][r]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::engine::generator;

    fn vertex(cat: &CategoryData, a: Label, b: Label, c: Label) -> HomMorphism {
        generator(cat, &Generator::BasisVertex(a, b, c, 0)).unwrap()
    }

    #[test]
    fn omega_inverse_pair() {
        for cat in builtins::all() {
            let n = cat.rank();
            for a in 0..n {
                for b in 0..n {
                    for c in cat.channels(a, b) {
                        let v = vertex(&cat, a, b, c);
                        let w = omega0(&cat, &omega_minus1(&cat, &v).unwrap()).unwrap();
                        assert!(w.max_diff(&v).unwrap() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn omega0_on_fibonacci_unit_channel_is_r_phase() {
        let cat = builtins::fibonacci();
        let v = vertex(&cat, 1, 1, 0);
        let w = omega0(&cat, &v).unwrap();
        let expect = cat.r(1, 1, 0).unwrap()[(0, 0)].inv();
        assert!((w.fusion_coords(&cat).unwrap()[0] - expect).norm() < 1e-12);
    }

    #[test]
    fn sigma_has_order_three() {
        let cat = builtins::ising();
        let n = cat.rank();
        for a in 0..n {
            for b in 0..n {
                for c in cat.channels(a, b) {
                    let v = vertex(&cat, a, b, c);
                    let s1 = sigma123(&cat, &v).unwrap();
                    let s3 = sigma123(&cat, &sigma123(&cat, &s1).unwrap()).unwrap();
                    assert!(s3.max_diff(&v).unwrap() < 1e-12, "{a} {b} {c}");
                    assert!(sigma132(&cat, &s1).unwrap().max_diff(&v).unwrap() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn unit_action_maps_to_contragredient() {
        let cat = builtins::fibonacci();
        let e = cat.unit();
        for a in 0..cat.rank() {
            let v = vertex(&cat, e, a, a);
            let t = tilde_a0(&cat, &v).unwrap();
            assert_eq!(t.src, vec![e, cat.dual(a)]);
            let expect = vertex(&cat, e, cat.dual(a), cat.dual(a));
            assert!(t.max_diff(&expect).unwrap() < 1e-12);
        }
    }
}

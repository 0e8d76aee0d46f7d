//! Field axioms checked exhaustively on small boxes, against an independent
//! polynomial-arithmetic oracle for power bases.

use gapgrid::{BasisSpec, GapBox, IntElement, MinimalPolynomial, StructureTable};
use num_bigint::BigInt;
use num_traits::Zero;

/// Product of two power-basis elements by schoolbook polynomial multiplication
/// followed by long division by the monic `p`. Shares nothing with the table.
fn poly_mul_mod(a: &[BigInt], b: &[BigInt], p: &[BigInt]) -> Vec<BigInt> {
    let n = p.len() - 1;
    let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            prod[i + j] += ai * bj;
        }
    }
    for d in (n..prod.len()).rev() {
        let lead = std::mem::take(&mut prod[d]);
        if lead.is_zero() {
            continue;
        }
        for (k, pk) in p.iter().enumerate().take(n) {
            prod[d - n + k] -= &lead * pk;
        }
    }
    prod.truncate(n);
    prod.resize(n, BigInt::zero());
    prod
}

struct Case {
    name: &'static str,
    poly: Vec<i64>,
    alpha: f64,
}

fn cases() -> Vec<Case> {
    vec![
        Case { name: "x^2-2", poly: vec![-2, 0, 1], alpha: std::f64::consts::SQRT_2 },
        Case { name: "x^3-2", poly: vec![-2, 0, 0, 1], alpha: 2f64.cbrt() },
        Case { name: "x-1", poly: vec![-1, 1], alpha: 1.0 },
        Case { name: "x^2-x-1", poly: vec![-1, -1, 1], alpha: (1.0 + 5f64.sqrt()) / 2.0 },
        Case { name: "x^4-10x^2+1", poly: vec![1, 0, -10, 0, 1], alpha: 2f64.sqrt() + 3f64.sqrt() },
    ]
}

fn table_of(c: &Case) -> (StructureTable, Vec<BigInt>) {
    let p = MinimalPolynomial::from_i64s(&c.poly).unwrap();
    let t = StructureTable::power_basis(&p, c.alpha).unwrap();
    (t, p.coefficients().to_vec())
}

fn small_box(n: usize, h: i64) -> Vec<IntElement> {
    GapBox::new(n, h.into()).iter().map(IntElement::new).collect()
}

#[test]
fn power_basis_tables_match_polynomial_reduction() {
    for c in cases() {
        let (t, p) = table_of(&c);
        let n = t.dim();
        assert!(t.validate().passed(), "{}", c.name);
        for i in 0..n {
            for j in 0..n {
                let mut a = vec![BigInt::zero(); n];
                let mut b = vec![BigInt::zero(); n];
                a[i] = 1.into();
                b[j] = 1.into();
                let expected = poly_mul_mod(&a, &b, &p);
                let got: Vec<_> = (0..n).map(|k| t.entry(i, j, k).clone()).collect();
                assert_eq!(got, expected, "{} c({i},{j},·)", c.name);
            }
        }
    }
}

#[test]
fn cube_root_reduction_examples() {
    let p: Vec<BigInt> = [-2, 0, 0, 1].iter().map(|&v| BigInt::from(v)).collect();
    let sq = |i: usize| {
        let mut v = vec![BigInt::zero(); 3];
        v[i] = 1.into();
        v
    };
    assert_eq!(poly_mul_mod(&sq(2), &sq(2), &p), vec![0.into(), 2.into(), 0.into()]);
    assert_eq!(poly_mul_mod(&sq(1), &sq(2), &p), vec![2.into(), 0.into(), 0.into()]);
}

#[test]
fn mul_matches_oracle_on_box() {
    for c in cases() {
        let (t, p) = table_of(&c);
        let bx = small_box(t.dim(), 1);
        for x in &bx {
            for y in &bx {
                let expected = poly_mul_mod(x.coords(), y.coords(), &p);
                assert_eq!(t.mul(x, y).unwrap().coords(), expected.as_slice(), "{}", c.name);
            }
        }
    }
}

#[test]
fn commutative_associative_unital_on_box() {
    for c in cases().into_iter().take(4) {
        let (t, _) = table_of(&c);
        let bx = small_box(t.dim(), 1);
        for x in &bx {
            assert_eq!(&t.mul(t.unity(), x).unwrap(), x);
            for y in &bx {
                let xy = t.mul(x, y).unwrap();
                assert_eq!(xy, t.mul(y, x).unwrap(), "{}", c.name);
                for z in &bx {
                    assert_eq!(
                        t.mul(&xy, z).unwrap(),
                        t.mul(x, &t.mul(y, z).unwrap()).unwrap(),
                        "{}",
                        c.name
                    );
                    assert_eq!(
                        t.mul(x, &y.add(z).unwrap()).unwrap(),
                        xy.add(&t.mul(x, z).unwrap()).unwrap(),
                        "{}",
                        c.name
                    );
                }
            }
        }
    }
}

#[test]
fn inversion_round_trips_on_box() {
    for c in cases() {
        let (t, _) = table_of(&c);
        let one = t.unity().to_rat();
        for x in small_box(t.dim(), 1).into_iter().filter(|x| !x.is_zero()) {
            let xr = x.to_rat();
            let inv = t.invert(&xr).unwrap();
            assert_eq!(t.mul_rat(&inv, &xr).unwrap(), one, "{} x = {x}", c.name);
        }
    }
}

#[test]
fn representation_matrix_applies_multiplication() {
    for c in cases().into_iter().take(3) {
        let (t, _) = table_of(&c);
        let bx = small_box(t.dim(), 1);
        for x in &bx {
            let m = t.representation_matrix(&x.to_rat()).unwrap();
            for y in &bx {
                let applied: Vec<_> = m
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(y.coords())
                            .map(|(a, b)| a * num_rational::BigRational::from_integer(b.clone()))
                            .sum::<num_rational::BigRational>()
                    })
                    .collect();
                assert_eq!(applied, t.mul(x, y).unwrap().to_rat().coords());
            }
        }
    }
}

#[test]
fn embedding_is_multiplicative_on_box() {
    for c in cases().into_iter().take(4) {
        let (t, _) = table_of(&c);
        let bx = small_box(t.dim(), 2);
        for x in &bx {
            for y in &bx {
                let direct = t.embed(x) * t.embed(y);
                let via = t.embed(&t.mul(x, y).unwrap());
                assert!(
                    (via - direct).abs() <= 1e-9 * direct.abs().max(1.0),
                    "{}: {x}·{y}: {via} vs {direct}",
                    c.name
                );
            }
        }
    }
}

/// ℚ(√2) with basis {√2, 1+√2}; 1 is not a basis element.
fn shifted_sqrt2() -> StructureTable {
    let spec = BasisSpec::from_json(
        r#"{"kind":"table","n":2,
            "c":[[[-2,2],[-1,2]],[[-1,2],[-1,3]]],
            "unity":[-1,1],
            "embedding":[1.4142135623730951,2.414213562373095]}"#,
    )
    .unwrap();
    spec.build().unwrap()
}

#[test]
fn basis_without_one_uses_explicit_unity() {
    let t = shifted_sqrt2();
    assert_eq!(t.unity(), &IntElement::from_i64s(&[-1, 1]));
    assert_eq!(t.c_lambda(), 3.into());
    let one = t.unity().to_rat();
    for x in small_box(2, 2) {
        assert_eq!(&t.mul(t.unity(), &x).unwrap(), &x);
        if !x.is_zero() {
            let inv = t.invert(&x.to_rat()).unwrap();
            assert_eq!(t.mul_rat(&x.to_rat(), &inv).unwrap(), one);
        }
        for y in small_box(2, 1) {
            let direct = t.embed(&x) * t.embed(&y);
            assert!((t.embed(&t.mul(&x, &y).unwrap()) - direct).abs() <= 1e-9 * direct.abs().max(1.0));
        }
    }
}

//! The pinned worked example over q = 70687, executed end to end and
//! diffed against embedded expected values: the two preparatory walks with
//! every intermediate classification, the scripted connecting-fiber search
//! with its quadratic splittings, the three fibral discrete logs, and the
//! assembled word.

use markoff::classify::classify;
use markoff::fiber_dlp::markoff_dlp;
use markoff::nt::factor;
use markoff::pathfinder::{find_connecting_fiber_with, PathWord};
use markoff::surface::{Axis, MarkoffPoint};
use markoff::{PrimeField, SpectralClass};

const Q: u64 = 70687;
const P: [u64; 3] = [45506, 13064, 18];
const QPT: [u64; 3] = [11229, 5772, 56858];

/// y-coordinates seen while walking P forward with rho1: (t, order or 0 for
/// elliptic).
const P_SIDE_CLASSES: [(u64, u64); 3] = [(13064, 1683), (18, 4158), (40902, 70686)];

/// Iterates of the backward walk from Q (including the start), and the
/// classification of each z-coordinate.
const Q_SIDE_ITERATES: [([u64; 3], u64); 16] = [
    ([11229, 5772, 56858], 0),
    ([11229, 65943, 5772], 35343),
    ([11229, 6407, 65943], 10098),
    ([11229, 29942, 6407], 0),
    ([11229, 16944, 29942], 0),
    ([11229, 35748, 16944], 0),
    ([11229, 2200, 35748], 0),
    ([11229, 66363, 2200], 0),
    ([11229, 21119, 66363], 0),
    ([11229, 46109, 21119], 0),
    ([11229, 47313, 46109], 594),
    ([11229, 7133, 47313], 0),
    ([11229, 47632, 7133], 5049),
    ([11229, 47838, 47632], 0),
    ([11229, 19535, 47838], 7854),
    ([11229, 2424, 19535], 70686),
];

/// Scripted x proposals with the roots of F(x, 40902, Z) and F(x, Y, 19535).
const FIBER_SCRIPT: [(u64, &[u64], &[u64]); 5] = [
    (29628, &[], &[]),
    (19562, &[], &[42621, 57310]),
    (43036, &[], &[]),
    (6057, &[27506, 70305], &[]),
    (29896, &[935, 45089], &[595, 6503]),
];

const EXPECTED_EXPONENTS: (u64, u64, u64) = (26986, 30287, 65193);
const EXPECTED_WORD: [(u8, i64); 5] = [(1, 2), (2, 26986), (1, 30287), (3, 65193), (1, 15)];

pub fn run() -> i32 {
    let mut failures = 0u32;
    let mut check = |label: &str, ok: bool, detail: String| {
        if ok {
            println!("ok       {label}: {detail}");
        } else {
            println!("MISMATCH {label}: {detail}");
            failures += 1;
        }
    };

    let k = PrimeField::new(Q).expect("pinned modulus is prime");
    let f = factor(Q - 1);
    check(
        "factorization",
        f.factors() == [(2, 1), (3, 3), (7, 1), (11, 1), (17, 1)],
        format!("{:?}", f.factors()),
    );

    let p = MarkoffPoint::new(&k, P[0], P[1], P[2]).expect("start point");
    let q_pt = MarkoffPoint::new(&k, QPT[0], QPT[1], QPT[2]).expect("end point");

    // forward rho1 walk: classify y at every stop
    let mut cur = p;
    for (i, &(t, order)) in P_SIDE_CLASSES.iter().enumerate() {
        check(
            "P-walk y value",
            cur.y() == t,
            format!("step {i}: y = {} want {t}", cur.y()),
        );
        check_class(&mut check, classify(&k, t, &f), t, order);
        if i + 1 < P_SIDE_CLASSES.len() {
            cur = cur.rho(&k, Axis::X);
        }
    }
    let p_prime = cur;
    check(
        "P' after two rotations",
        p_prime.coords() == [45506, 40902, 10340],
        format!("{p_prime}"),
    );

    // backward rho1 walk from Q
    let mut cur = q_pt;
    for (i, &(coords, order)) in Q_SIDE_ITERATES.iter().enumerate() {
        check(
            "Q-walk iterate",
            cur.coords() == coords,
            format!("step {i}: {cur}"),
        );
        check_class(&mut check, classify(&k, cur.z(), &f), cur.z(), order);
        if i + 1 < Q_SIDE_ITERATES.len() {
            cur = cur.rho_inv(&k, Axis::X);
        }
    }
    let q_prime = cur;
    check(
        "Q' after fifteen inverse rotations",
        q_prime.coords() == [11229, 2424, 19535],
        format!("{q_prime}"),
    );

    // scripted connecting-fiber search, checking each quadratic split
    for &(x, z_roots, y_roots) in &FIBER_SCRIPT {
        let split = |pinned: u64| {
            let b = k.neg(k.mul(k.mul(3, x), pinned));
            let c = k.add(k.mul(x, x), k.mul(pinned, pinned));
            k.solve_monic_quadratic(b, c)
        };
        check(
            "fiber quadratic in Z",
            split(p_prime.y()) == z_roots,
            format!("x = {x}: {:?}", split(p_prime.y())),
        );
        check(
            "fiber quadratic in Y",
            split(q_prime.z()) == y_roots,
            format!("x = {x}: {:?}", split(q_prime.z())),
        );
    }
    let mut script = FIBER_SCRIPT.iter().map(|&(x, _, _)| x);
    let fiber = find_connecting_fiber_with(
        &k,
        &f,
        p_prime.y(),
        q_prime.z(),
        &mut || script.next().expect("script exhausted"),
        FIBER_SCRIPT.len() as u64,
    )
    .expect("scripted search succeeds");
    check(
        "accepted connecting fiber",
        (fiber.x, fiber.z0, fiber.y0) == (29896, 935, 595),
        format!("x = {}, z0 = {}, y0 = {}", fiber.x, fiber.z0, fiber.y0),
    );

    let p_dd = MarkoffPoint::new(&k, fiber.x, p_prime.y(), fiber.z0).expect("P''");
    let q_dd = MarkoffPoint::new(&k, fiber.x, fiber.y0, q_prime.z()).expect("Q''");
    check("P''", p_dd.coords() == [29896, 40902, 935], format!("{p_dd}"));
    check("Q''", q_dd.coords() == [29896, 595, 19535], format!("{q_dd}"));

    // the three fibral discrete logs
    let a = markoff_dlp(&k, &f, &p_prime, &p_dd, Axis::Y).expect("a");
    let c = markoff_dlp(&k, &f, &p_dd, &q_dd, Axis::X).expect("c");
    let b = markoff_dlp(&k, &f, &q_dd, &q_prime, Axis::Z).expect("b");
    check(
        "fibral exponents (a, c, b)",
        (a, c, b) == EXPECTED_EXPONENTS,
        format!("({a}, {c}, {b})"),
    );

    // assemble and apply the full word
    let word = PathWord::from_steps(
        EXPECTED_WORD
            .iter()
            .map(|&(i, e)| (Axis::from_index(i).unwrap(), e)),
    );
    let reached = word.apply(&k, p);
    check("word applied to P", reached == q_pt, format!("{reached}"));

    if failures == 0 {
        println!("worked example reproduced exactly");
        0
    } else {
        println!("worked example FAILED: {failures} mismatches");
        1
    }
}

fn check_class(
    check: &mut impl FnMut(&str, bool, String),
    class: SpectralClass,
    t: u64,
    order: u64,
) {
    let ok = match class {
        SpectralClass::Hyperbolic { order: o, .. } => order == o,
        SpectralClass::Elliptic => order == 0,
        SpectralClass::Parabolic => false,
    };
    check(
        "classification",
        ok,
        format!(
            "t = {t}: {}{}",
            class.kind(),
            class.order().map_or(String::new(), |o| format!(", order {o}"))
        ),
    );
}

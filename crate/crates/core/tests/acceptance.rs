//! Acceptance suite. Prints one line per criterion and exits nonzero when any
//! criterion fails or exceeds its time limit.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use motivic_cover::blowup::{blowup, check_invariance, BlowupCenter, CenterStratum, Verdict};
use motivic_cover::config::{set, Component, ComponentId, ComponentSet, Configuration, Stratum};
use motivic_cover::format::{center_from_json, config_from_json, graph_from_json};
use motivic_cover::milnor::{acampo_zeta, graph_to_config, milnor_euler, motivic_milnor_fiber, MilnorSelection};
use motivic_cover::motive::{motive, motive_expansion, motive_restricted};
use motivic_cover::random::{random_torus_config, sweep, Bounds};
use motivic_cover::realization::{euler, zeta, zeta_closed_form, zeta_expansion, CyclotomicRational};
use motivic_cover::ring::{projective_class, RingElement};

type Check = Result<(), String>;

/// Label, description, check and time limit in milliseconds.
type Criterion = (&'static str, &'static str, fn() -> Check, u64);

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn r(s: &str) -> RingElement {
    s.parse().unwrap()
}

fn euclid(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        euclid(b, a % b)
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn mu_times(g: i64, x: &str) -> RingElement {
    &RingElement::mu(g as u64) * &r(x)
}

/// `n` coordinate hyperplanes in affine `n`-space.
fn hyperplanes(mults: &[i64]) -> Configuration {
    let n = mults.len() as u32;
    let ids: Vec<u32> = (1..=n).collect();
    let mut strata = Vec::new();
    for mask in 1u32..(1 << n) {
        let s: ComponentSet = ids.iter().filter(|i| mask & (1 << (*i - 1)) != 0).map(|i| (*i).into()).collect();
        let class = RingElement::torus(n - s.len() as u32);
        strata.push(Stratum::torus(s, class).with_adjacency(set(ids.clone())));
    }
    let comps = ids.iter().zip(mults).map(|(i, m)| Component::new(*i, *m));
    Configuration::checked(n, comps, strata).unwrap()
}

fn exceptional_part(c: &Configuration, star: &ComponentId) -> RingElement {
    motive_restricted(c, |s| s.components.contains(star)).unwrap()
}

fn criterion_1() -> Check {
    for m1 in 1..=10 {
        for m2 in 1..=10 {
            let g = euclid(m1, m2);
            let expected = -mu_times(g, "L-1");
            let c = hyperplanes(&[m1, m2]);
            let before = motive_restricted(&c, |s| s.components.len() == 2).unwrap();
            ensure(before == expected, || format!("m=({m1},{m2}) point term {before}"))?;
            let b = blowup(&c, &BlowupCenter::full(set([1u32, 2]), ComponentSet::new())).unwrap();
            let after = exceptional_part(&b.config, &b.exceptional);
            ensure(after == expected, || format!("m=({m1},{m2}) exceptional part {after}"))?;
            let rep = check_invariance(&c, &BlowupCenter::full(set([1u32, 2]), ComponentSet::new()), &set([1u32, 2])).unwrap();
            ensure(rep.verdict == Verdict::Pass, || format!("m=({m1},{m2}): {rep}"))?;
        }
    }
    for m in 1..=10 {
        let lhs = mu_times(m, "L") - mu_times(m, "L-1");
        ensure(lhs == RingElement::mu(m as u64), || format!("one-component identity for m={m}"))?;
        let c = Configuration::checked(2, [Component::new(1u32, m)], [Stratum::torus(set([1u32]), r("L"))]).unwrap();
        let center = BlowupCenter::strict(
            set([1u32]),
            ComponentSet::new(),
            2,
            vec![CenterStratum::torus(ComponentSet::new(), RingElement::one(), set([1u32]))],
        );
        let b = blowup(&c, &center).unwrap();
        let exc = exceptional_part(&b.config, &b.exceptional);
        ensure(exc == RingElement::mu(m as u64), || format!("one-component exceptional part {exc}"))?;
        let rep = check_invariance(&c, &center, &set([1u32])).unwrap();
        ensure(rep.verdict == Verdict::Pass, || rep.to_string())?;
    }
    Ok(())
}

fn criterion_2() -> Check {
    for m1 in 1..=6 {
        for m2 in 1..=6 {
            for m3 in 1..=6 {
                let g = euclid(euclid(m1, m2), m3);
                let sq = mu_times(g, "(L-1)^2");
                let stated = mu_times(g, "(L-1)^2 - 3*(L-1)^2 + 3*(L-1)^2");
                ensure(stated == sq, || "closing identity".into())?;
                let c = hyperplanes(&[m1, m2, m3]);
                let point = motive_restricted(&c, |s| s.components.len() == 3).unwrap();
                ensure(point == sq, || format!("point term {point}"))?;
                let center = BlowupCenter::full(set([1u32, 2, 3]), ComponentSet::new());
                let b = blowup(&c, &center).unwrap();
                let exc = exceptional_part(&b.config, &b.exceptional);
                ensure(exc == sq, || format!("m=({m1},{m2},{m3}) exceptional part {exc}"))?;
                let rep = check_invariance(&c, &center, &c.component_ids()).unwrap();
                ensure(rep.verdict == Verdict::Pass, || rep.to_string())?;
            }
        }
    }
    Ok(())
}

fn criterion_3() -> Check {
    for m1 in 1..=6 {
        for m2 in 1..=6 {
            let m = euclid(m1, m2);
            let lhs = mu_times(m, "L*(L-1)") - mu_times(m, "L*(L-1)").scale(&BigInt::from(2)) + mu_times(m, "(L-1)^2");
            ensure(lhs == -mu_times(m, "L-1"), || "Example C identity".into())?;
            let both = set([1u32, 2]);
            let c = Configuration::checked(
                3,
                [Component::new(1u32, m1), Component::new(2u32, m2)],
                [
                    Stratum::torus(set([1u32]), r("L*(L-1)")).with_adjacency(both.clone()),
                    Stratum::torus(set([2u32]), r("L*(L-1)")).with_adjacency(both.clone()),
                    Stratum::torus(both.clone(), r("L")),
                ],
            )
            .unwrap();
            let center = BlowupCenter::strict(
                both.clone(),
                ComponentSet::new(),
                3,
                vec![CenterStratum::torus(ComponentSet::new(), RingElement::one(), both.clone())],
            );
            let b = blowup(&c, &center).unwrap();
            let exc = exceptional_part(&b.config, &b.exceptional);
            ensure(exc == -mu_times(m, "L-1"), || format!("exceptional part {exc}"))?;
            let rep = check_invariance(&c, &center, &both).unwrap();
            ensure(rep.verdict == Verdict::Pass, || rep.to_string())?;
        }
    }
    let c = config_from_json(&fixture("example_c.json")).unwrap();
    let center = center_from_json(&fixture("example_c_center.json")).unwrap();
    let b = blowup(&c, &center).unwrap();
    let exc = exceptional_part(&b.config, &b.exceptional);
    ensure(exc == -mu_times(2, "L-1"), || format!("fixture exceptional part {exc}"))
}

fn every_selection(c: &Configuration) -> Vec<ComponentSet> {
    let ids: Vec<ComponentId> = c.component_ids().into_iter().collect();
    (1u32..(1 << ids.len()))
        .map(|mask| (0..ids.len()).filter(|j| mask & (1 << j) != 0).map(|j| ids[j].clone()).collect())
        .collect()
}

fn fixture_invariance(name: &str) -> Check {
    let c = config_from_json(&fixture(&format!("{name}.json"))).unwrap();
    let center = center_from_json(&fixture(&format!("{name}_center.json"))).unwrap();
    for a in every_selection(&c) {
        let rep = check_invariance(&c, &center, &a).map_err(|e| e.to_string())?;
        ensure(rep.verdict == Verdict::Pass, || format!("{name}: {rep}"))?;
    }
    Ok(())
}

fn criterion_4() -> Check {
    fixture_invariance("example_d")?;
    fixture_invariance("example_e")?;
    let c = config_from_json(&fixture("example_d.json")).unwrap();
    let center = center_from_json(&fixture("example_d_center.json")).unwrap();
    let b = blowup(&c, &center).unwrap();
    for ids in [vec!["1", "3", "*"], vec!["2", "3", "*"]] {
        let s = b.config.stratum(&set(ids.clone())).ok_or_else(|| format!("missing {ids:?}"))?;
        ensure(s.class == Some(RingElement::one()), || format!("{ids:?} is not a point"))?;
    }
    ensure(b.config.stratum(&set(["3", "*"])).is_some(), || "missing {3,*}".into())
}

fn criterion_5() -> Check {
    for r_plus_1 in 1u32..=8 {
        let rr = r_plus_1 - 1;
        for k in 1..=r_plus_1 {
            // [P^{r-k}] with the convention [P^{-1}] = 0
            let mut rhs = if k == r_plus_1 { RingElement::zero() } else { projective_class(rr - k) };
            for l in 0..k {
                let binom = (0..l).fold(BigInt::from(1), |acc, i| acc * BigInt::from(k - i) / BigInt::from(i + 1));
                let term = &RingElement::lefschetz().pow(rr + 1 - k) * &RingElement::torus(k - l - 1);
                rhs += term.scale(&binom);
            }
            let lhs = RingElement::l_poly((0..=rr).map(|i| (i, 1)));
            ensure(lhs == projective_class(rr), || format!("P^{rr} class"))?;
            ensure(lhs == rhs, || format!("r={rr} k={k}: {lhs} vs {rhs}"))?;
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    let s = sweep(20240601, 1000, &Bounds::default());
    ensure(s.count >= 500 && s.all_passed(), || s.to_string())?;
    ensure(s.full_centers > 0 && s.strict_centers > 0 && s.zero_exceptional > 0, || {
        format!("coverage: {s}")
    })
}

fn orbit_oracle(a: u64, b: u64) -> (u64, u64) {
    let mut seen = vec![false; (a * b) as usize];
    let mut orbits = 0;
    let mut size = 0;
    for start in 0..a * b {
        let (x0, y0) = (start / b, start % b);
        if seen[(x0 * b + y0) as usize] {
            continue;
        }
        orbits += 1;
        let (mut x, mut y, mut len) = (x0, y0, 0);
        loop {
            seen[(x * b + y) as usize] = true;
            len += 1;
            x = (x + 1) % a;
            y = (y + 1) % b;
            if (x, y) == (x0, y0) {
                break;
            }
        }
        if size != 0 && size != len {
            return (0, 0);
        }
        size = len;
    }
    (orbits, size)
}

fn criterion_7() -> Check {
    for a in 1..=24u64 {
        for b in 1..=24u64 {
            let (count, size) = orbit_oracle(a, b);
            let p = &RingElement::mu(a) * &RingElement::mu(b);
            ensure(p == RingElement::monomial(count, size, 0), || format!("[mu_{a}][mu_{b}] = {p}"))?;
        }
    }
    Ok(())
}

fn euler_oracle(c: &Configuration, a: &ComponentSet) -> BigInt {
    a.iter()
        .filter_map(|i| c.stratum(&[i.clone()].into()).map(|s| (c.multiplicity(i).unwrap().abs(), s.euler)))
        .map(|(m, e)| BigInt::from(m * e))
        .sum()
}

fn realization_consistent(c: &Configuration, a: &ComponentSet, label: &str) -> Check {
    let m = motive(c, a).map_err(|e| format!("{label}: {e}"))?;
    let cf = zeta_closed_form(c, a).unwrap();
    ensure(zeta(&m) == cf, || format!("{label}: zeta {} vs closed form {cf}", zeta(&m)))?;
    let oracle = euler_oracle(c, a);
    ensure(euler(&m) == oracle, || format!("{label}: euler {} vs {oracle}", euler(&m)))
}

fn criterion_8() -> Check {
    let mut names: Vec<String> = ["example_a", "example_b", "example_c", "example_d", "example_e", "one_component", "zero_exceptional"]
        .iter()
        .map(|s| format!("{s}.json"))
        .collect();
    for m1 in 1..=6 {
        for m2 in 1..=6 {
            names.push(format!("germs/x{m1}y{m2}.json"));
        }
    }
    for n in &names {
        let c = config_from_json(&fixture(n)).unwrap();
        for a in every_selection(&c) {
            realization_consistent(&c, &a, n)?;
        }
    }
    let bounds = Bounds::default();
    for i in 0..200 {
        let (c, a) = random_torus_config(99, i, &bounds);
        realization_consistent(&c, &a, &format!("random case {i}"))?;
        realization_consistent(&c, &c.component_ids(), &format!("random case {i}, all"))?;
    }
    Ok(())
}

fn criterion_9() -> Check {
    let g = graph_from_json(&fixture("cusp.json")).unwrap();
    let sel = MilnorSelection::Exceptional;
    let expected = CyclotomicRational::factor(2, -1) * CyclotomicRational::factor(3, -1) * CyclotomicRational::factor(6, 1);
    let z = acampo_zeta(&g, &sel).unwrap();
    ensure(z == expected, || format!("A'Campo zeta {z}"))?;
    ensure(z.to_string() == "(1-t^2)^-1 (1-t^3)^-1 (1-t^6)^1", || z.to_string())?;
    let milnor_number = 2;
    let e = milnor_euler(&g, &sel).unwrap();
    ensure(e == BigInt::from(1 - milnor_number), || format!("euler {e}"))?;
    let c = graph_to_config(&g).unwrap();
    let a = g.resolve(&sel).unwrap();
    let x = motive_expansion(&c, &a).unwrap();
    ensure(zeta_expansion(&x) == expected, || "zeta of the Milnor fiber".into())?;
    let center = center_from_json(&fixture("cusp_center.json")).unwrap();
    let point_on_e2 = BlowupCenter::strict(
        set([2u32]),
        ComponentSet::new(),
        2,
        vec![CenterStratum::torus(ComponentSet::new(), RingElement::one(), set([2u32]))],
    );
    for center in [center, point_on_e2] {
        let rep = check_invariance(&c, &center, &a).map_err(|e| e.to_string())?;
        ensure(rep.verdict == Verdict::Pass, || rep.to_string())?;
        ensure(rep.before.equivalent(&rep.after), || rep.to_string())?;
        let z_after = zeta_expansion(&rep.after);
        ensure(z_after == expected, || format!("zeta after blow-up {z_after}"))?;
        ensure(rep.after.euler() == BigInt::from(-1), || "euler after blow-up".into())?;
    }
    Ok(())
}

fn criterion_10() -> Check {
    let g = graph_from_json(&fixture("smooth_germ.json")).unwrap();
    let sel = MilnorSelection::Exceptional;
    let s = motivic_milnor_fiber(&g, &sel).unwrap();
    ensure(s == RingElement::one(), || format!("Milnor fiber {s}"))?;
    ensure(zeta(&s) == CyclotomicRational::factor(1, -1), || zeta(&s).to_string())?;
    ensure(acampo_zeta(&g, &sel).unwrap() == CyclotomicRational::factor(1, -1), || "A'Campo zeta".into())?;
    ensure(euler(&s) == BigInt::from(1), || euler(&s).to_string())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1", "Example A point and one-component contributions", criterion_1, 1000),
        ("2", "Example B triple-point contribution", criterion_2, 1000),
        ("3", "Example C point on a double curve", criterion_3, 1000),
        ("4", "Examples D and E invariance with transversal components", criterion_4, 1000),
        ("5", "projective space stratification identity", criterion_5, 1000),
        ("6", "randomized invariance sweep (1000 cases)", criterion_6, 30_000),
        ("7", "basis product rule against orbit enumeration", criterion_7, 1000),
        ("8", "realization consistency on fixtures and 200 random configurations", criterion_8, 10_000),
        ("9", "cusp zeta, Euler characteristic and resolution independence", criterion_9, 1000),
        ("10", "smooth germ", criterion_10, 1000),
    ];
    let mut failed = 0;
    for (id, name, f, limit_ms) in criteria {
        let t = Instant::now();
        let result = f();
        let elapsed = t.elapsed();
        let limit = Duration::from_millis(limit_ms);
        let status = match (&result, elapsed <= limit) {
            (Ok(()), true) => "PASS",
            _ => "FAIL",
        };
        println!(
            "criterion {id:>2} {status} {name} ({:.1} ms, limit {limit_ms} ms)",
            elapsed.as_secs_f64() * 1000.0
        );
        if let Err(msg) = &result {
            println!("    {}", msg.replace('\n', "\n    "));
        }
        if status == "FAIL" {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion check(s) failed");
        ExitCode::FAILURE
    }
}

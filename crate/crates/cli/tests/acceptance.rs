//! Acceptance suite: one line per criterion. Runs without the libtest
//! harness so the lines are always printed.
//!
//! Numerical checks are exact group comparisons. The only tolerances are
//! wall-clock budgets, pinned per criterion in `BUDGETS` (seconds).

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use equirep::algebra::{cohomology, homology};
use equirep::bredon::{
    bredon_cohomology, bredon_homology, check_naturality, GMap, GSet, TrivialModule,
};
use equirep::duality::verify_lefschetz;
use equirep::functor::{
    check_bounds, check_cobar_bounds, group_homology, tor_over_category, AbFunctor, FiniteCategory,
    Variance,
};
use equirep::g_complex::{
    join, sd, singular_subcomplex, GComplex, Subcomplex, DEFAULT_SIMPLEX_CAP,
};
use equirep::lab::{
    boundary_sphere, join_structure, key_lemma_experiment, linear_sphere, polygon,
    ExperimentConfig, Mode,
};
use equirep::perm_group::all_subgroups;
use equirep::{FgAbGroup, FiniteGroup, Subgroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGETS: [f64; 8] = [60.0, 300.0, 120.0, 600.0, 120.0, 300.0, 300.0, 300.0];
const SEED: u64 = 0x5eed_2024;

/// `pass` is the criterion itself; `gate` is what this suite requires of it
/// (equal to `pass` except where a failure is the expected outcome).
struct Outcome {
    pass: bool,
    gate: bool,
    detail: String,
}

impl Outcome {
    fn plain(pass: bool, detail: String) -> Outcome {
        Outcome {
            pass,
            gate: pass,
            detail,
        }
    }
}

type Check = fn() -> Result<Outcome, String>;

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn m(s: &str) -> TrivialModule {
    TrivialModule::new(s.parse().expect("coefficient"))
}

fn reduced(mut h: Vec<FgAbGroup>) -> Vec<FgAbGroup> {
    if let Some(h0) = h.first_mut() {
        *h0 = FgAbGroup::new(h0.rank().saturating_sub(1), h0.torsion().to_vec());
    }
    while h.last().is_some_and(FgAbGroup::is_trivial) {
        h.pop();
    }
    h
}

fn sphere_joins() -> Result<Outcome, String> {
    let t = FiniteGroup::trivial();
    let mut bad = Vec::new();
    for p in 0..=2 {
        for q in 0..=2 {
            let x = boundary_sphere(&t, p).map_err(e)?;
            let y = boundary_sphere(&t, q).map_err(e)?;
            let j = join(&x, &y).map_err(e)?;
            let got = reduced(homology(&j.chain_complex(), &FgAbGroup::z()));
            let sphere = boundary_sphere(&t, p + q + 1).map_err(e)?;
            let via_sphere = reduced(homology(&sphere.chain_complex(), &FgAbGroup::z()));
            let mut exact = vec![FgAbGroup::zero(); p + q + 2];
            exact[p + q + 1] = FgAbGroup::z();
            if got != exact || via_sphere != exact {
                bad.push(format!("S{p}*S{q}"));
            }
        }
    }
    Ok(Outcome::plain(
        bad.is_empty(),
        format!("9 joins, mismatches {bad:?}"),
    ))
}

fn quotient_safe(x: GComplex) -> Result<GComplex, String> {
    let mut x = x;
    for _ in 0..2 {
        if x.validate().quotient_safe {
            break;
        }
        x = sd(&x).map_err(e)?;
    }
    Ok(x)
}

fn free_complexes() -> Result<Vec<(String, GComplex)>, String> {
    let mut out = Vec::new();
    for (mm, weights) in [
        (2, vec![1]),
        (2, vec![1, 1]),
        (3, vec![1]),
        (3, vec![1, 1]),
        (3, vec![1, 2]),
        (4, vec![1]),
        (4, vec![1, 1]),
        (4, vec![1, 3]),
    ] {
        out.push((
            format!("C{mm} weights {weights:?}"),
            linear_sphere(mm, &weights).map_err(e)?,
        ));
    }
    for (mm, v, s) in [(2, 6, 3), (3, 6, 2), (4, 8, 2)] {
        out.push((
            format!("C{mm} polygon {v}"),
            polygon(&FiniteGroup::cyclic(mm), v, &[s]).map_err(e)?,
        ));
    }
    out.into_iter()
        .map(|(n, x)| {
            if !x.is_free() {
                return Err(format!("{n} is not free"));
            }
            Ok((n, quotient_safe(x)?))
        })
        .collect()
}

fn bredon_vs_quotient() -> Result<Outcome, String> {
    let cs = free_complexes()?;
    let mut bad = Vec::new();
    for (name, x) in &cs {
        if !x.validate().quotient_safe {
            bad.push(format!("{name}: not quotient-safe"));
            continue;
        }
        let q = equirep::g_complex::quotient_complex(x, true).map_err(e)?;
        let qc = q.complex.chain_complex();
        let x = Arc::new(x.clone());
        for c in ["Z", "Z/2", "Z/3", "Z/4"] {
            let c = m(c);
            let h = bredon_homology(&x, None, &c).map_err(e)?;
            let hc = bredon_cohomology(&x, None, &c).map_err(e)?;
            if h != homology(&qc, &c.underlying) || hc != cohomology(&qc, &c.underlying) {
                bad.push(format!("{name} with {c}"));
            }
        }
    }
    Ok(Outcome::plain(
        bad.is_empty(),
        format!(
            "{} complexes x 4 coefficients, mismatches {bad:?}",
            cs.len()
        ),
    ))
}

fn random_gset(rng: &mut ChaCha8Rng, subs: &[Subgroup], g: &Arc<FiniteGroup>) -> GSet {
    let mut s = GSet::empty(g);
    for _ in 0..rng.gen_range(1..=3) {
        s = s.disjoint_union(&GSet::cosets(&subs[rng.gen_range(0..subs.len())]));
    }
    s
}

fn naturality_suite() -> Result<Outcome, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let groups = [
        ("C2", FiniteGroup::cyclic(2)),
        ("C3", FiniteGroup::cyclic(3)),
        ("C4", FiniteGroup::cyclic(4)),
        ("S3", FiniteGroup::symmetric(3).map_err(e)?),
    ];
    let coeffs = ["Z/2", "Z/4", "Z/6", "Z + Z/2"];
    let (mut isos, mut preserving, mut preserving_ok) = (0, 0, 0);
    let mut failures = Vec::new();
    let mut jump_failures_only = true;
    for trial in 0..100 {
        let (_, g) = &groups[rng.gen_range(0..groups.len())];
        let c = m(coeffs[rng.gen_range(0..coeffs.len())]);
        let subs = all_subgroups(g);
        let source = random_gset(&mut rng, &subs, g);
        let mut target = random_gset(&mut rng, &subs, g);
        let mut images = Vec::new();
        for o in source.orbits() {
            let h = source.stabilizer(o[0]);
            let fits = |t: &GSet| -> Vec<u32> {
                (0..t.size() as u32)
                    .filter(|&w| h.is_subgroup_of(&t.stabilizer(w)))
                    .collect()
            };
            let mut cands = fits(&target);
            if cands.is_empty() {
                target = target.disjoint_union(&GSet::cosets(&h));
                cands = fits(&target);
            }
            images.push(cands[rng.gen_range(0..cands.len())]);
        }
        // a grown target invalidates nothing: earlier images keep their stabilizers
        let f = GMap::from_orbit_images(&source, &target, &images).map_err(e)?;
        let r = check_naturality(&f, &c).map_err(e)?;
        if r.psi_iso && r.theta_iso && r.theta_rep_independent {
            isos += 1;
        }
        if r.isotropy_preserving {
            preserving += 1;
            if r.all_hold() {
                preserving_ok += 1;
            }
        }
        if !r.all_hold() {
            failures.push(trial);
            jump_failures_only &= r.max_isotropy_index > 1;
        }
    }
    let gate = isos == 100 && preserving_ok == preserving && jump_failures_only;
    Ok(Outcome {
        pass: failures.is_empty(),
        gate,
        detail: format!(
            "isomorphisms {isos}/100, isotropy-preserving {preserving_ok}/{preserving}, failing maps {failures:?} (all isotropy jumps: {jump_failures_only})"
        ),
    })
}

fn duality() -> Result<Outcome, String> {
    let c2 = FiniteGroup::cyclic(2);
    let coeffs = [m("Z"), m("Z/2"), m("Z/4")];
    let poles = GComplex::from_facets(
        2,
        &[vec![0], vec![1]],
        Arc::clone(&c2),
        &[equirep::Perm::identity(2)],
    )
    .map_err(e)?;
    let square = polygon(&c2, 4, &[2]).map_err(e)?;
    let s2 = Arc::new(join(&poles, &square).map_err(e)?);
    let singular = singular_subcomplex(&s2, &Subgroup::trivial(&c2)).map_err(e)?;
    let fixed = verify_lefschetz(&s2, &singular, &coeffs).map_err(e)?;
    let circle = Arc::new(square);
    let free = verify_lefschetz(&circle, &Subcomplex::empty(&circle), &coeffs).map_err(e)?;
    let s3 = Arc::new(linear_sphere(2, &[0, 1]).map_err(e)?);
    let s3_singular = singular_subcomplex(&s3, &Subgroup::trivial(&c2)).map_err(e)?;
    let stretch = match verify_lefschetz(&s3, &s3_singular, &coeffs) {
        Ok(r) => r.holds().to_string(),
        Err(err) => format!("error ({err})"),
    };
    Ok(Outcome::plain(
        fixed.holds() && free.holds(),
        format!(
            "S2 rel poles {}, free circle {}, S3 rel fixed circle {stretch} (non-gating)",
            fixed.holds(),
            free.holds()
        ),
    ))
}

fn cobar_bar() -> Result<Outcome, String> {
    let groups = [
        ("C2", FiniteGroup::cyclic(2)),
        ("C3", FiniteGroup::cyclic(3)),
        ("S3", FiniteGroup::symmetric(3).map_err(e)?),
    ];
    let mut bad = Vec::new();
    for (gname, g) in &groups {
        let cat = FiniteCategory::from_group(g);
        let z = FgAbGroup::z();
        for c in ["Z", "Z/2", "Z/3"] {
            let c = m(c);
            let bar = group_homology(g, &c.underlying, 3).map_err(e)?;
            let f = AbFunctor::constant(&cat, Variance::Contra, &z);
            let gm = AbFunctor::constant(&cat, Variance::Co, &c.underlying);
            let cobar = tor_over_category(&cat, &f, &gm, 3).map_err(e)?;
            let bounds = check_cobar_bounds(&cat, &f, &gm, &cobar);
            let bounds_ok = bounds
                .iter()
                .all(|b| b.rank_bound && b.order_bound != Some(false));
            if bar != cobar || !bounds_ok || !check_bounds(&bar, g.order(), &c.underlying) {
                bad.push(format!("{gname} with {c}"));
            }
        }
    }
    Ok(Outcome::plain(
        bad.is_empty(),
        format!("9 pairs, degrees 0..3, mismatches {bad:?}"),
    ))
}

fn scene(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(name)
}

fn lab(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_spheres-lab"))
        .args(args)
        .output()
        .map_err(e)?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn antipodal_family() -> Result<Outcome, String> {
    let x = Arc::new(linear_sphere(2, &[1]).map_err(e)?);
    let cfg = ExperimentConfig {
        n_range: (2, 3),
        k_max: 2,
        coefficients: vec![TrivialModule::z()],
        max_simplices: DEFAULT_SIMPLEX_CAP,
    };
    let t = key_lemma_experiment(&x, &Subgroup::trivial(x.group()), &cfg).map_err(e)?;
    let want = ["Z", "Z/2", "0"];
    let mut ok = t.passes();
    for n in 2..=3 {
        let vals: Vec<&str> = t
            .rows
            .iter()
            .filter(|r| r.part == "A" && r.n == n)
            .map(|r| r.value.as_str())
            .collect();
        ok &= vals == want;
    }
    let modes: Vec<Mode> = t.runs.iter().map(|r| r.mode).collect();
    ok &= modes == [Mode::Sd2, Mode::Direct];
    let path = scene("scenes/stabilize.json");
    let (code, _) = lab(&[
        "stabilize",
        path.to_str().ok_or("path")?,
        "--experiment",
        "antipodal_family",
        "--n-range",
        "2..3",
    ])?;
    ok &= code == 0;
    let modes: Vec<String> = modes.iter().map(Mode::to_string).collect();
    Ok(Outcome::plain(
        ok,
        format!("n=2,3 in modes {modes:?}, H_0..2 = {want:?}, cli exit {code}"),
    ))
}

fn join_law() -> Result<Outcome, String> {
    let mut parts = Vec::new();
    let mut ok = true;
    for (mm, w) in [(2, vec![0, 1]), (4, vec![1, 2])] {
        let x = Arc::new(linear_sphere(mm, &w).map_err(e)?);
        let js = join_structure(&x, 3, DEFAULT_SIMPLEX_CAP).map_err(e)?;
        ok &= js.holds() && !js.join_law.is_empty();
        parts.push(format!(
            "C{mm} {w:?}: {} law rows, {} codimension rows",
            js.join_law.len(),
            js.codimension.len()
        ));
    }
    Ok(Outcome::plain(ok, parts.join("; ")))
}

fn golden() -> Result<Outcome, String> {
    let path = scene("scenes/stabilize.json");
    let p = path.to_str().ok_or("path")?;
    let mut parts = Vec::new();
    let mut ok = true;
    for fmt in ["csv", "json"] {
        let (c1, a) = lab(&["stabilize", p, "--format", fmt])?;
        let (c2, b) = lab(&["stabilize", p, "--format", fmt])?;
        let want = std::fs::read(scene(&format!("golden/stabilize.{fmt}"))).map_err(e)?;
        let same = a == b && a == want && c1 == c2 && c1 != 2;
        ok &= same;
        parts.push(format!("{fmt} {} bytes identical {same}", a.len()));
    }
    Ok(Outcome::plain(ok, parts.join(", ")))
}

fn main() -> ExitCode {
    let checks: [(&str, Check); 8] = [
        ("sphere joins", sphere_joins),
        ("bredon equals quotient", bredon_vs_quotient),
        ("psi/theta naturality", naturality_suite),
        ("lefschetz duality", duality),
        ("cobar equals bar", cobar_bar),
        ("antipodal family", antipodal_family),
        ("join law and codimension", join_law),
        ("golden determinism", golden),
    ];
    let mut unexpected = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let in_budget = secs <= BUDGETS[i];
        let (pass, gate, detail) = match outcome {
            Ok(o) => (o.pass && in_budget, o.gate && in_budget, o.detail),
            Err(err) => (false, false, format!("error: {err}")),
        };
        let tag = if pass { "PASS" } else { "FAIL" };
        let note = if !pass && gate { " [expected]" } else { "" };
        println!(
            "criterion {} {tag}{note} {name}: {detail} ({secs:.1}s / {:.0}s)",
            i + 1,
            BUDGETS[i]
        );
        if !gate {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria failed unexpectedly");
        ExitCode::FAILURE
    }
}

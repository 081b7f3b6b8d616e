//! The acceptance suite run by `digifix verify` and by the `acceptance` test.
//!
//! Each criterion returns a one-line detail on success or the first
//! mismatch on failure. Library answers are compared against the brute-force
//! references in [`crate::oracle`] wherever those are affordable.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use digifix::generate::{cube, cycle, fig_sexample, fig_xexample, interval, unit_box, wedge_cycles_8};
use digifix::spectrum::{all_continuous_selfmaps, combine_all, pull_index_with, pull_indices};
use digifix::{
    combine_spectra, disjoint_union, fix_structure, fixed_point_spectrum, forced_fixed_points,
    homotopy_class, homotopy_classes, is_rigid_image, is_rigid_map, lasso_rigidity_certificate, nminus1_criterion,
    product, wedge, write_report, DigitalImage, FixStructure, HomotopyOptions, LassoCertificate,
    LassoOptions, Report, ReportFormat, SearchOptions, SelfMap, Spectrum, SpectrumOp,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::commands::{self, Settings};
use crate::oracle;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn lib<T>(r: digifix::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub limit: Duration,
    /// Where the checked value departs from the stated one, and why.
    pub deviation: Option<&'static str>,
    check: fn() -> Check,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub deviation: Option<&'static str>,
    pub elapsed: Duration,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "F(C_n) for n = 1..9",
            limit: secs(10),
            deviation: None,
            check: c1,
        },
        Criterion {
            id: 2,
            title: "S(id), S(c), S(l) on C_5..C_8",
            limit: secs(30),
            deviation: Some("S(l) = {1} on odd cycles, not {0,1}: x_i -> x_{d-i} fixes x_i iff 2i = d mod n, which has exactly one solution for odd n"),
            check: c2,
        },
        Criterion {
            id: 3,
            title: "three homotopy classes on C_5..C_7, class(id) = rotations",
            limit: secs(60),
            deviation: None,
            check: c3,
        },
        Criterion {
            id: 4,
            title: "F([a,b]) = {0..b-a+1} for b-a <= 5",
            limit: secs(5),
            deviation: Some("a one-point interval has only the identity, so F = {1}"),
            check: c4,
        },
        Criterion {
            id: 5,
            title: "F(box(a,b,u)) = {0..ab} and the fold maps f_t",
            limit: secs(120),
            deviation: Some(
                "box(1,1,u) has F = {1}; f_t is c_1-continuous for all t but c_2-continuous only for t < 2, so under c_2 the fold (1,y) -> (2,y) for y <= t is checked instead",
            ),
            check: c5,
        },
        Criterion {
            id: 6,
            title: "F(cube) = {0..6, 8}, no N(x1) in N*(x2) pair",
            limit: secs(60),
            deviation: None,
            check: c6,
        },
        Criterion {
            id: 7,
            title: "rigid and non-rigid images, rotated fig_xexample",
            limit: secs(30),
            deviation: Some("C_1 and one-point intervals have a single self-map and are rigid; non-rigidity is checked for #X >= 2"),
            check: c7,
        },
        Criterion {
            id: 8,
            title: "lasso certificates for fig_xexample and fig_sexample",
            limit: secs(60),
            deviation: None,
            check: c8,
        },
        Criterion {
            id: 9,
            title: "F(fig_sexample) = {0..12, 15} with pull indices >= 3",
            limit: secs(600),
            deviation: None,
            check: c9,
        },
        Criterion {
            id: 10,
            title: "pull indices on [1,3]",
            limit: secs(1),
            deviation: None,
            check: c10,
        },
        Criterion {
            id: 11,
            title: "small-scale property suites (a)-(f)",
            limit: secs(600),
            deviation: None,
            check: c11,
        },
        Criterion {
            id: 12,
            title: "byte-identical json across runs and thread counts",
            limit: secs(120),
            deviation: None,
            check: c12,
        },
    ]
}

pub fn run(c: &Criterion) -> Outcome {
    let started = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let elapsed = started.elapsed();
    let (passed, detail) = match result {
        Ok(d) if elapsed <= c.limit => (true, d),
        Ok(d) => (false, format!("{d}; took {elapsed:.1?}, limit {:?}", c.limit)),
        Err(e) => (false, e),
    };
    Outcome {
        id: c.id,
        title: c.title,
        passed,
        detail,
        deviation: c.deviation,
        elapsed,
    }
}

/// Runs the criteria whose ids are in `only` (all of them when empty).
pub fn run_selected(only: &[u32]) -> Vec<Outcome> {
    criteria()
        .iter()
        .filter(|c| only.is_empty() || only.contains(&c.id))
        .map(run)
        .collect()
}

/// Report without timings, so it is byte-stable.
pub fn report(outcomes: &[Outcome]) -> Report {
    let rows: Vec<_> = outcomes
        .iter()
        .map(|o| json!({"id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail, "deviation": o.deviation}))
        .collect();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    Report::new(
        "verify",
        None,
        json!({"criteria": rows, "passed": passed, "total": outcomes.len(), "all_passed": passed == outcomes.len()}),
    )
}

pub fn table(outcomes: &[Outcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&format!(
            "{:>2}  {}  {:<62} {:>9.2?}  {}\n",
            o.id,
            if o.passed { "PASS" } else { "FAIL" },
            o.title,
            o.elapsed,
            o.detail
        ));
        if let Some(d) = o.deviation {
            out.push_str(&format!("          note: {d}\n"));
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    out.push_str(&format!("{passed}/{} criteria passed\n", outcomes.len()));
    out
}

fn spectrum_of(g: &DigitalImage) -> Result<BTreeSet<usize>, String> {
    Ok(lib(fixed_point_spectrum(g))?.0.iter().collect())
}

fn set(s: &Spectrum) -> BTreeSet<usize> {
    s.iter().collect()
}

fn c1() -> Check {
    for n in 1..=9 {
        let c = lib(cycle(n))?;
        let expected: BTreeSet<usize> = match n {
            1 => [1].into(),
            2..=4 => (0..=n).collect(),
            _ => (0..=n / 2 + 1).chain([n]).collect(),
        };
        let got = spectrum_of(&c)?;
        ensure!(got == expected, "F(C_{n}) = {got:?}, expected {expected:?}");
        if n <= 6 {
            let brute = oracle::brute_spectrum(&c);
            ensure!(brute == expected, "brute force gives F(C_{n}) = {brute:?}");
        }
    }
    Ok("all nine spectra match; brute force agrees for n <= 6".into())
}

fn class_spectrum(f: &SelfMap<'_>) -> Result<(BTreeSet<usize>, BTreeSet<Vec<usize>>), String> {
    let class = lib(homotopy_class(f, &HomotopyOptions::default()))?;
    ensure!(class.complete, "class of {:?} not fully explored", f.targets());
    let members = class
        .members
        .ok_or("class members not retained")?
        .into_iter()
        .map(SelfMap::into_targets)
        .collect();
    Ok((set(&class.fix_counts), members))
}

fn rotations(n: usize) -> BTreeSet<Vec<usize>> {
    (0..n).map(|d| (0..n).map(|i| (i + d) % n).collect()).collect()
}

fn c2() -> Check {
    let mut flips = Vec::new();
    for n in 5..=8 {
        let c = lib(cycle(n))?;
        let id = SelfMap::identity(&c);
        let constant = lib(SelfMap::new(&c, vec![0; n]))?;
        let flip = lib(SelfMap::new(&c, (0..n).map(|i| (n - i) % n).collect()))?;

        let (s_id, _) = class_spectrum(&id)?;
        ensure!(s_id == [0, n].into(), "S(id) on C_{n} = {s_id:?}");
        let (s_c, _) = class_spectrum(&constant)?;
        ensure!(s_c == (0..=n / 2 + 1).collect(), "S(c) on C_{n} = {s_c:?}");

        let (s_l, members) = class_spectrum(&flip)?;
        // independent count over the maps x_i -> x_{d-i}
        let family: BTreeSet<Vec<usize>> = (0..n).map(|d| (0..n).map(|i| (d + n - i) % n).collect()).collect();
        ensure!(members == family, "class(l) on C_{n} is not {{r_d o l}}");
        let counted: BTreeSet<usize> = family.iter().map(|t| oracle::fix_count(t)).collect();
        ensure!(s_l == counted, "S(l) on C_{n} = {s_l:?}, direct count {counted:?}");
        let expected: BTreeSet<usize> = if n % 2 == 0 { [0, 2].into() } else { [1].into() };
        ensure!(s_l == expected, "S(l) on C_{n} = {s_l:?}, expected {expected:?}");
        flips.push(format!("C_{n}: {s_l:?}"));
    }
    Ok(format!("S(id) and S(c) as stated; S(l) {}", flips.join(", ")))
}

fn c3() -> Check {
    for n in 5..=7 {
        let c = lib(cycle(n))?;
        let classes = lib(homotopy_classes(&c, &HomotopyOptions::default()))?;
        ensure!(classes.len() == 3, "C_{n} has {} classes", classes.len());
        let total: usize = classes.iter().map(|k| k.size).sum();
        ensure!(total == lib(all_continuous_selfmaps(&c, &SearchOptions::default()))?.0.len(), "classes of C_{n} do not partition the maps");
        let id = SelfMap::identity(&c);
        let k = classes
            .iter()
            .find(|k| k.contains(&id) == Some(true))
            .ok_or(format!("no class of C_{n} contains id"))?;
        let members: BTreeSet<Vec<usize>> = k.members.clone().unwrap_or_default().into_iter().map(SelfMap::into_targets).collect();
        ensure!(members == rotations(n), "class(id) on C_{n} is not the rotations");
    }
    Ok("3 classes each; class(id) is exactly {r_0..r_(n-1)}".into())
}

fn c4() -> Check {
    for a in [-1i64, 2] {
        for d in 0..=5i64 {
            let g = lib(interval(a, a + d))?;
            let expected: BTreeSet<usize> = if d == 0 { [1].into() } else { (0..=d as usize + 1).collect() };
            let got = spectrum_of(&g)?;
            ensure!(got == expected, "F([{a},{}]) = {got:?}", a + d);
            ensure!(oracle::brute_spectrum(&g) == expected, "brute force disagrees on [{a},{}]", a + d);
        }
    }
    Ok("b-a = 1..5 match the formula, b-a = 0 gives {1}; brute force agrees".into())
}

/// `(1,y) -> (2,y+shift)` for `y <= t`, identity elsewhere, as target indices.
fn fold(g: &DigitalImage, t: i64, shift: i64) -> Result<Vec<usize>, String> {
    let f = lib(SelfMap::from_point_fn(g, |p| {
        let (x, y) = (p.0[0], p.0[1]);
        if x == 1 && y <= t {
            vec![2, y + shift].into()
        } else {
            p.clone()
        }
    }))?;
    Ok(f.into_targets())
}

fn c5() -> Check {
    let mut brute = 0;
    for u in 1..=2 {
        for a in 1..=3i64 {
            for b in 1..=3i64 {
                let g = lib(unit_box(a, b, u))?;
                let ab = (a * b) as usize;
                let expected: BTreeSet<usize> = if ab == 1 { [1].into() } else { (0..=ab).collect() };
                let got = spectrum_of(&g)?;
                ensure!(got == expected, "F(box({a},{b},{u})) = {got:?}");
                if ab <= 6 {
                    ensure!(oracle::brute_spectrum(&g) == expected, "brute force disagrees on box({a},{b},{u})");
                    brute += 1;
                }
                if a < 2 {
                    continue;
                }
                for t in 0..b {
                    let want = ab - t as usize;
                    let f_t = fold(&g, t, 1)?;
                    if u == 1 {
                        ensure!(oracle::continuous_by_edges(&g, &f_t), "f_{t} on box({a},{b},1) is not continuous");
                        ensure!(oracle::fix_count(&f_t) == want, "f_{t} on box({a},{b},1) has the wrong count");
                    } else {
                        ensure!(
                            oracle::continuous_by_edges(&g, &f_t) == (t < 2),
                            "f_{t} on box({a},{b},2): c_2-continuity not as analysed"
                        );
                        let straight = fold(&g, t, 0)?;
                        ensure!(oracle::continuous_by_edges(&g, &straight), "straight fold t={t} on box({a},{b},2) is not continuous");
                        ensure!(oracle::fix_count(&straight) == want, "straight fold t={t} on box({a},{b},2) has the wrong count");
                    }
                }
            }
        }
    }
    Ok(format!("18 boxes match ({brute} also by brute force); fold maps realise ab - t"))
}

fn c6() -> Check {
    let g = cube();
    let expected: BTreeSet<usize> = [0, 1, 2, 3, 4, 5, 6, 8].into();
    let got = spectrum_of(&g)?;
    ensure!(got == expected, "F(cube) = {got:?}");
    let brute = oracle::brute_spectrum(&g);
    ensure!(brute == expected, "brute force gives {brute:?}");
    ensure!(nminus1_criterion(&g).is_none(), "criterion found a pair on the cube");
    ensure!(!oracle::moves_exactly_one(&g), "some map moves exactly one cube point");
    Ok("F(cube) matches by search and by all 8^8 functions; criterion absent".into())
}

fn c7() -> Check {
    for g in [wedge_cycles_8(), fig_xexample(), fig_sexample()] {
        ensure!(lib(is_rigid_image(&g))?, "{} is not rigid", g.name());
    }
    for k in 1..=8 {
        let g = lib(interval(0, k))?;
        let mut t: Vec<usize> = (0..g.len()).collect();
        t[0] = 1;
        ensure!(oracle::continuous_by_edges(&g, &t), "end fold on [0,{k}] is not continuous");
        ensure!(!lib(is_rigid_image(&g))?, "[0,{k}] reported rigid");
    }
    for n in 2..=9 {
        let c = lib(cycle(n))?;
        let r: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        ensure!(oracle::continuous_by_edges(&c, &r) && (0..n).all(|i| oracle::close(&c, i, r[i])), "r_1 is not one step from id on C_{n}");
        ensure!(!lib(is_rigid_image(&c))?, "C_{n} reported rigid");
    }
    let c1 = lib(cycle(1))?;
    ensure!(lib(is_rigid_image(&c1))?, "C_1 should be rigid");

    let x = fig_xexample();
    let rot = lib(SelfMap::from_point_fn(&x, |p| vec![6 - p.0[0], 2 - p.0[1]].into()))?;
    ensure!(rot.is_bijection() && oracle::continuous_by_edges(&x, rot.targets()), "rotation is not an automorphism");
    ensure!(lib(is_rigid_map(&rot, &HomotopyOptions::default()))?, "rotation is not a rigid map");
    let (s, _) = class_spectrum(&rot)?;
    ensure!(rot.fix_count() == 0 && s == [0].into(), "rotation has S = {s:?}");
    Ok("3 rigid presets; [0,1..8] and C_2..C_9 move one step; C_1 rigid; rotation has S = {0}".into())
}

fn c8() -> Check {
    for g in [fig_xexample(), fig_sexample()] {
        let LassoCertificate::Certified(lassos) = lib(lasso_rigidity_certificate(&g, &LassoOptions::default()))? else {
            return Err(format!("{} not certified", g.name()));
        };
        let starts: BTreeSet<(usize, usize)> = lassos.iter().map(|l| l.start()).collect();
        let pairs: BTreeSet<(usize, usize)> = g.edges().into_iter().flat_map(|(a, b)| [(a, b), (b, a)]).collect();
        ensure!(starts == pairs, "{} lassos miss an ordered pair", g.name());
        ensure!(lassos.iter().all(|l| l.verify(&g)), "a lasso for {} fails verification", g.name());
        ensure!(lib(is_rigid_image(&g))?, "{} certified but not rigid", g.name());
    }
    Ok("both certified on every ordered edge, every lasso re-verified, both rigid".into())
}

fn c9() -> Check {
    let g = fig_sexample();
    let n = g.len();
    let got = spectrum_of(&g)?;
    let expected: BTreeSet<usize> = (0..=12).chain([15]).collect();
    ensure!(got == expected, "F(fig_sexample) = {got:?}");
    let opts = SearchOptions::default();
    let p = lib(pull_indices(&g, &opts))?;
    ensure!(p.iter().all(|&v| v >= 3), "pull indices {p:?}");
    for x in 0..n {
        let (px, w) = lib(pull_index_with(&g, x, &opts))?;
        let t = w.targets();
        ensure!(
            oracle::continuous_by_edges(&g, t) && t[x] != x && n - oracle::fix_count(t) == px,
            "pull witness for point {x} is invalid"
        );
    }
    let least = p.iter().min().copied().unwrap_or(0);
    ensure!(!got.contains(&13) && !got.contains(&14) && n - least < 13, "13, 14 not excluded");
    Ok(format!("F matches; min P = {least}, so counts {}..{} are excluded", n + 1 - least, n - 1))
}

fn c10() -> Check {
    let g = lib(interval(1, 3))?;
    let p = lib(pull_indices(&g, &SearchOptions::default()))?;
    ensure!(p == [1, 2, 1], "P = {p:?}");
    let brute: Vec<Option<usize>> = (0..3).map(|x| oracle::pull_index(&g, x)).collect();
    ensure!(brute == [Some(1), Some(2), Some(1)], "brute force P = {brute:?}");
    Ok("P(1) = P(3) = 1, P(2) = 2; brute force agrees".into())
}

/// Seeded random graph on `n` points, joined up by a random spanning tree if `connected`.
fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, connected: bool) -> Result<DigitalImage, String> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    if connected {
        for b in 1..n {
            edges.push((rng.gen_range(0..b), b));
        }
    }
    edges.sort();
    edges.dedup();
    lib(DigitalImage::from_edges(format!("random{n}"), n, &edges))
}

/// A random cycle through 4 to 7 points plus sparse chords; leaves are rare,
/// so `#X-1` is often missing from the spectrum.
fn looped_graph(rng: &mut ChaCha8Rng) -> Result<DigitalImage, String> {
    let n = rng.gen_range(4..=7);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.08) {
                edges.push((a, b));
            }
        }
    }
    let edges: BTreeSet<(usize, usize)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    lib(DigitalImage::from_edges(format!("loop{n}"), n, &edges.into_iter().collect::<Vec<_>>()))
}

/// Named small images plus seeded random graphs, all with at most `max_n` points.
fn pool(max_n: usize) -> Result<Vec<DigitalImage>, String> {
    let mut out = Vec::new();
    for k in 0..max_n as i64 {
        out.push(lib(interval(0, k))?);
    }
    for n in 1..=max_n {
        out.push(lib(cycle(n))?);
    }
    for u in 1..=2 {
        for a in 1..=3 {
            for b in a..=3 {
                out.push(lib(unit_box(a, b, u))?);
            }
        }
    }
    let c3 = lib(cycle(3))?;
    let c4 = lib(cycle(4))?;
    let i1 = lib(interval(0, 1))?;
    out.push(lib(wedge(&c3, &c3, 0, 0))?);
    out.push(lib(wedge(&c3, &c4, 0, 0))?);
    out.push(lib(wedge(&c4, &c4, 0, 0))?);
    out.push(disjoint_union(&i1, &c3));
    out.push(disjoint_union(&i1, &i1));
    out.push(lib(product(&[i1.clone(), c3.clone()], 1))?);
    out.push(lib(product(&[i1.clone(), lib(interval(0, 2))?], 2))?);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..16 {
        let n = rng.gen_range(2..=max_n);
        let connected = rng.gen_bool(0.7);
        out.push(random_graph(&mut rng, n, 0.4, connected)?);
    }
    out.retain(|g| g.len() <= max_n);
    Ok(out)
}

/// (a) continuity by edges equals continuity by connected subsets.
fn c11a() -> Check {
    let mut functions = 0u64;
    let images = pool(6)?;
    for g in &images {
        let table = oracle::connected_table(g);
        for t in oracle::all_functions(g.len()) {
            let by_edges = oracle::continuous_by_edges(g, &t);
            ensure!(by_edges == oracle::continuous_by_subsets(&t, &table), "{}: {t:?} disagrees", g.name());
            ensure!(lib(SelfMap::new(g, t.clone()))?.is_continuous() == by_edges, "{}: library disagrees on {t:?}", g.name());
            functions += 1;
        }
    }
    Ok(format!("(a) {} images, {functions} functions", images.len()))
}

/// (b) `#X-1 in F(X)`, the neighborhood criterion and a one-point move agree.
fn c11b() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    let mut hits = 0;
    for i in 0..200 {
        let g = if i % 2 == 0 {
            let n = rng.gen_range(2..=7);
            let p = rng.gen_range(0.1..0.7);
            random_graph(&mut rng, n, p, true)?
        } else {
            looped_graph(&mut rng)?
        };
        let n = g.len();
        let by_criterion = nminus1_criterion(&g).is_some();
        let by_spectrum = spectrum_of(&g)?.contains(&(n - 1));
        let by_move = oracle::moves_exactly_one(&g);
        ensure!(
            by_criterion == by_spectrum && by_spectrum == by_move,
            "graph {i} {:?}: criterion {by_criterion}, spectrum {by_spectrum}, move {by_move}",
            g.edges()
        );
        hits += usize::from(by_move);
    }
    Ok(format!("(b) 200 graphs, {hits} with #X-1 in F"))
}

/// (c) disjoint unions sum spectra; products contain the product set.
fn c11c() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let brute = |g: &DigitalImage| -> Spectrum { oracle::brute_spectrum(g).into_iter().collect() };
    for _ in 0..40 {
        let (na, nb) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
        let a = random_graph(&mut rng, na, 0.5, true)?;
        let b = random_graph(&mut rng, nb, 0.5, true)?;
        let sum = combine_spectra(&brute(&a), &brute(&b), SpectrumOp::Oplus);
        let got = spectrum_of(&disjoint_union(&a, &b))?;
        ensure!(got == set(&sum), "F({:?} + {:?}) = {got:?}, expected {sum}", a.edges(), b.edges());
    }
    for _ in 0..30 {
        let k = rng.gen_range(2..=3);
        let mut factors = Vec::new();
        for _ in 0..k {
            let n = rng.gen_range(1..=3);
            factors.push(random_graph(&mut rng, n, 0.5, true)?);
        }
        if factors.iter().map(DigitalImage::len).product::<usize>() > 12 {
            factors.truncate(2);
        }
        let spectra: Vec<Spectrum> = factors.iter().map(brute).collect();
        let lower = set(&combine_all(&spectra, SpectrumOp::Otimes));
        for u in 1..=factors.len() {
            let got = spectrum_of(&lib(product(&factors, u))?)?;
            ensure!(lower.is_subset(&got), "product with u={u} misses part of {lower:?}");
        }
    }
    Ok("(c) 40 unions, 30 products".into())
}

/// (d) fixed point sets on cycles are connected or two opposite points.
fn c11d() -> Check {
    let mut maps = 0;
    for n in 1..=9 {
        let c = lib(cycle(n))?;
        let table = oracle::connected_table(&c);
        let all = lib(all_continuous_selfmaps(&c, &SearchOptions::default()))?.0;
        if n <= 6 {
            ensure!(all.len() == oracle::brute_maps(&c).len(), "C_{n}: map count differs from brute force");
        }
        for t in &all {
            let f = lib(SelfMap::new(&c, t.clone()))?;
            let structure = lib(fix_structure(&f))?;
            if oracle::fix_connected(t, &table) {
                ensure!(matches!(structure, FixStructure::Empty | FixStructure::Connected), "C_{n} {t:?}: {structure:?}");
            } else {
                let fix: Vec<usize> = (0..n).filter(|&i| t[i] == i).collect();
                ensure!(n % 2 == 0 && fix.len() == 2 && fix[1] - fix[0] == n / 2, "C_{n} {t:?} has Fix {fix:?}");
                ensure!(matches!(structure, FixStructure::Disconnected { antipodal_pair: Some(_), .. }), "C_{n} {t:?}: {structure:?}");
            }
            maps += 1;
        }
    }
    Ok(format!("(d) {maps} maps on C_1..C_9"))
}

/// (e) fixed points force every point lying on all geodesics between them.
fn c11e() -> Check {
    let images = pool(7)?;
    let mut maps = 0;
    for g in &images {
        let n = g.len();
        let common: Vec<Vec<Option<BTreeSet<usize>>>> =
            (0..n).map(|a| (0..n).map(|b| oracle::on_every_geodesic(g, a, b)).collect()).collect();
        for t in lib(all_continuous_selfmaps(g, &SearchOptions::default()))?.0 {
            let fix: Vec<usize> = (0..n).filter(|&i| t[i] == i).collect();
            for &a in &fix {
                for &b in &fix {
                    if let Some(c) = &common[a][b] {
                        ensure!(c.iter().all(|&v| t[v] == v), "{}: {t:?} moves a point between {a} and {b}", g.name());
                    }
                }
            }
            let f = lib(SelfMap::new(g, t))?;
            ensure!(lib(forced_fixed_points(&f))?.confirmed, "{}: forced points not fixed", g.name());
            maps += 1;
        }
    }
    Ok(format!("(e) {} images, {maps} maps", images.len()))
}

/// (f) classes from one-step moves equal classes from arbitrary chains.
fn c11f() -> Check {
    let images = pool(5)?;
    for g in &images {
        let classes = lib(homotopy_classes(g, &HomotopyOptions::default()))?;
        let mut got: Vec<Vec<Vec<usize>>> = classes
            .into_iter()
            .map(|k| k.members.unwrap_or_default().into_iter().map(SelfMap::into_targets).collect())
            .collect();
        got.sort();
        ensure!(got == oracle::multi_step_classes(g), "{}: classes differ", g.name());
    }
    Ok(format!("(f) {} images", images.len()))
}

fn c11() -> Check {
    let parts = [c11a(), c11b(), c11c(), c11d(), c11e(), c11f()];
    let mut details = Vec::new();
    for p in parts {
        details.push(p?);
    }
    Ok(details.join("; "))
}

/// Json bytes of a fixed batch of reports, computed on `threads` workers.
fn report_bytes(threads: usize) -> Result<Vec<u8>, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())?;
    pool.install(|| {
        let s = Settings::default();
        let c7 = lib(cycle(7))?;
        let c6 = lib(cycle(6))?;
        let b = lib(unit_box(3, 3, 2))?;
        let x = fig_xexample();
        let k = cube();
        let fold = lib(SelfMap::new(&c6, vec![0, 1, 2, 3, 2, 1]))?;
        let reports = [
            commands::spectrum(&c7, &s),
            commands::spectrum(&b, &s),
            commands::sfix(&SelfMap::identity(&c7), &s),
            commands::classes(&c6, &s),
            commands::rigid(&x, &s),
            commands::pull(&x, None, &s),
            commands::lasso(&x, &s),
            commands::fixset(&fold),
            commands::retract(&c6, &[0, 1, 2].into(), &s),
            commands::criterion(&k),
        ];
        let mut out = Vec::new();
        for r in reports {
            out.extend(write_report(&lib(r)?, ReportFormat::Json));
        }
        Ok(out)
    })
}

fn c12() -> Check {
    let first = report_bytes(1)?;
    for threads in [4, 1, 4] {
        ensure!(report_bytes(threads)? == first, "json differs with {threads} threads");
    }
    Ok(format!("10 reports, {} bytes, identical over 4 runs on 1 and 4 threads", first.len()))
}

//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::HashSet;
use std::process::Command;
use std::time::Instant;

use atlas_core::admissible::{kw_elements, straight_classes, ParahoricLabel};
use atlas_core::coxeter::orbit_closure;
use atlas_core::ekor::{i_set, is_basic_stratum, stratum_report, supp_sigma};
use atlas_core::export::word_string;
use atlas_core::oracle::{adm_by_reflections, run_suites};
use atlas_core::siegel::SiegelContext;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ctx(g: usize) -> Result<SiegelContext, String> {
    SiegelContext::new(g).map_err(|e| format!("g={g}: {e}"))
}

fn structural_counts() -> Outcome {
    let start = Instant::now();
    for g in 1..=4 {
        let c = ctx(g)?;
        let w = c.group().finite_weyl_group().len();
        let expected = (1usize << g) * (1..=g).product::<usize>();
        ensure(w == expected, || format!("g={g}: |W| = {w}, expected {expected}"))?;
        let gw = c.gw().len();
        ensure(gw == 1 << g, || format!("g={g}: |ᵍW| = {gw}"))?;
    }
    for (g, size, profile) in [(1, 3, vec![1, 2]), (2, 13, vec![1, 3, 5, 4])] {
        let c = ctx(g)?;
        let oracle = adm_by_reflections(c.group(), c.mu());
        let fast: HashSet<_> = c.adm().elements().iter().cloned().collect();
        ensure(oracle == fast, || format!("g={g}: subword closure and reflection-descent oracle differ"))?;
        ensure(c.adm().len() == size, || format!("g={g}: |Adm| = {}", c.adm().len()))?;
        ensure(c.adm().length_profile() == profile, || format!("g={g}: profile {:?}", c.adm().length_profile()))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.1} s"))?;
    Ok(format!("|W| = 2^g g!, |ᵍW| = 2^g (g ≤ 4); |Adm| = 3, 13 (1/3/5/4); {secs:.1} s"))
}

fn basic_agreement() -> Outcome {
    let mut checked = 0;
    for g in 1..=4 {
        let c = ctx(g)?;
        let grp = c.group();
        for k in ParahoricLabel::all(grp) {
            let kw = kw_elements(grp, c.adm(), k).map_err(|e| format!("g={g}, K={}: {e}", k.nodes()))?;
            for x in &kw {
                let generic = is_basic_stratum(grp, x);
                let closed = c.basic_closed_form(x).is_some();
                checked += 1;
                ensure(generic == closed, || {
                    format!("g={g}, K={}, x={:?}: generic {generic}, closed form {closed}", k.nodes(), grp.reduced_word(x).word)
                })?;
            }
        }
    }
    Ok(format!("{checked} (K, x) pairs, zero mismatches"))
}

fn closed_form_lemmas() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for g in 1..=4 {
        let c = ctx(g)?;
        let grp = c.group();
        let k = c.hyperspecial();
        for cc in 0..=g / 2 {
            let (lemma_supp, lemma_i) = c.eo_closed_forms(cc);
            for word in c.cw_new(cc).map_err(|e| e.to_string())? {
                let x = c.eo_correspondence(&grp.finite_word(&word)).map_err(|e| e.to_string())?;
                let supp = supp_sigma(grp, &x).closure;
                let iset = i_set(grp, k.nodes(), &x);
                checked += 1;
                if supp != lemma_supp || iset != lemma_i {
                    failures.push(format!(
                        "g={g}, c={cc}, w={}: supp_σ {supp} vs {lemma_supp}, I {iset} vs {lemma_i}",
                        word_string(&word, "")
                    ));
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{checked} elements, supp_σ and I(K,w,σ) match"))
    } else {
        Err(format!("{} of {checked} elements disagree: {}", failures.len(), failures.join("; ")))
    }
}

fn basic_counts() -> Outcome {
    for (g, n) in [(1, 1), (2, 5)] {
        let c = ctx(g)?;
        let r = stratum_report(c.group(), c.adm(), ParahoricLabel::iwahori()).map_err(|e| e.to_string())?;
        let b = r.iter().filter(|x| x.is_basic).count();
        ensure(b == n, || format!("g={g}: {b} basic Iwahori strata, expected {n}"))?;
    }
    let mut eo = Vec::new();
    for g in 1..=4 {
        let c = ctx(g)?;
        let r = stratum_report(c.group(), c.adm(), c.hyperspecial()).map_err(|e| e.to_string())?;
        let b = r.iter().filter(|x| x.is_basic).count();
        ensure(b == 1 << (g / 2), || format!("g={g}: {b} basic EO strata, expected {}", 1 << (g / 2)))?;
        eo.push(b.to_string());
    }
    Ok(format!("Iwahori 1, 5; EO {} for g = 1..4", eo.join(", ")))
}

fn oracle_equivalences() -> Outcome {
    let mut lines = Vec::new();
    for g in 1..=3 {
        let c = ctx(g)?;
        let grp = c.group();
        let tau = c.tau().element.clone();
        let omegas = [grp.inv(&tau), tau];
        for rep in run_suites(grp, c.adm(), &omegas, 6, None) {
            ensure(rep.passed(), || format!("g={g}: {rep}: {}", rep.mismatches.join("; ")))?;
            lines.push(rep.checked);
        }
    }
    Ok(format!("{} oracle comparisons, 100% agreement", lines.iter().sum::<usize>()))
}

fn straight_structure() -> Outcome {
    let mut counts = Vec::new();
    for (g, n) in [(1, 2), (2, 3)] {
        let c = ctx(g)?;
        let grp = c.group();
        let classes = straight_classes(grp, c.adm()).map_err(|e| e.to_string())?;
        let keys: HashSet<_> = classes.iter().map(|k| (k.newton.clone(), k.kottwitz.clone())).collect();
        ensure(keys.len() == classes.len(), || format!("g={g}: repeated invariant pairs"))?;
        let mu_class = grp.lattice_class(c.mu());
        let mu_bar = grp.newton_vector(&grp.translation(c.mu()));
        let tau_nu = grp.newton_vector(&c.tau().element);
        for k in &classes {
            ensure(k.kottwitz == mu_class, || format!("g={g}: κ ≠ μ^♮"))?;
            ensure(grp.newton_leq(&k.newton, &mu_bar).unwrap_or(false), || format!("g={g}: ν ≰ μ̄"))?;
            if k.newton != tau_nu {
                let below = grp.newton_leq(&tau_nu, &k.newton).unwrap_or(false);
                ensure(below, || format!("g={g}: basic class not below {:?}", k.newton))?;
            }
        }
        let basic: Vec<_> = classes.iter().filter(|k| k.is_basic).collect();
        ensure(basic.len() == 1 && basic[0].newton == tau_nu, || format!("g={g}: basic class is not τ_μ's"))?;
        ensure(classes.len() == n, || format!("g={g}: {} classes, expected {n}", classes.len()))?;
        counts.push(classes.len().to_string());
    }
    Ok(format!("{} classes for g = 1, 2; τ_μ strictly minimal", counts.join(", ")))
}

fn eo_bijection() -> Outcome {
    for g in 1..=3 {
        let c = ctx(g)?;
        let pairs = c.eo_map().map_err(|e| format!("g={g}: {e}"))?;
        ensure(pairs.len() == 1 << g, || format!("g={g}: {} pairs", pairs.len()))?;
    }
    Ok("w ↦ τw is a bijection ᵍW → Adm ∩ ᴷW̃ for g = 1, 2, 3".into())
}

fn dl_sanity() -> Outcome {
    let mut strata = 0;
    let mut coxeter = 0;
    for g in 1..=4 {
        let c = ctx(g)?;
        let grp = c.group();
        let levels = if g <= 3 { ParahoricLabel::all(grp) } else { vec![ParahoricLabel::iwahori(), c.hyperspecial()] };
        for k in levels {
            for rec in stratum_report(grp, c.adm(), k).map_err(|e| e.to_string())? {
                ensure(rec.is_basic == rec.dl.is_some(), || format!("g={g}: dl present iff basic"))?;
                let Some(dl) = rec.dl else { continue };
                strata += 1;
                let where_ = || format!("g={g}, K={}, x={}", k.nodes(), word_string(&rec.word, "τ"));
                ensure(grp.diagram().is_finite_parabolic(dl.ambient), || format!("{}: W_ambient infinite", where_()))?;
                ensure(dl.dimension == grp.length(&rec.w), || format!("{}: dim ≠ l(x)", where_()))?;
                ensure(dl.parabolic.is_subset(dl.ambient), || format!("{}: parabolic ⊄ ambient", where_()))?;
                if dl.is_sigma_coxeter {
                    coxeter += 1;
                    let orbits = dl.frobenius.orbits(rec.supp.closure).len();
                    ensure(orbits == dl.dimension, || format!("{}: dim ≠ #orbits", where_()))?;
                    ensure(orbit_closure(&dl.frobenius, rec.supp.raw) == rec.supp.closure, || where_())?;
                }
            }
        }
    }
    Ok(format!("{strata} basic strata checked, {coxeter} σ-Coxeter"))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_atlas");
    let commands: &[&[&str]] = &[
        &["adm", "--g", "2"],
        &["adm", "--g", "3", "--format", "json"],
        &["adm", "--g", "2", "--format", "csv"],
        &["adm", "--g", "2", "--format", "dot"],
        &["classify", "--g", "2", "--level", "iwahori", "--format", "json"],
        &["classify", "--g", "3", "--level", "hyperspecial"],
        &["classify", "--g", "3", "--level", "1", "--format", "csv"],
        &["dl-data", "--g", "3", "--level", "0,3", "--format", "json"],
        &["compare", "--g", "3", "--format", "json"],
        &["compare", "--g", "4"],
        &["check", "--g", "2", "--format", "json"],
        &["adm", "--g", "0"],
    ];
    let run = |args: &[&str]| -> Result<(Option<i32>, Vec<u8>, Vec<u8>), String> {
        let o = Command::new(bin).args(args).env_clear().output().map_err(|e| e.to_string())?;
        Ok((o.status.code(), o.stdout, o.stderr))
    };
    for args in commands {
        let a = run(args)?;
        let b = run(args)?;
        ensure(a == b, || format!("`atlas {}` differs between runs", args.join(" ")))?;
    }
    Ok(format!("{} commands, byte-identical across runs", commands.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("structural counts", structural_counts),
        ("basic-classification agreement", basic_agreement),
        ("closed-form lemma agreement", closed_form_lemmas),
        ("basic stratum counts", basic_counts),
        ("oracle equivalences", oracle_equivalences),
        ("straight-class structure", straight_structure),
        ("eo_correspondence bijectivity", eo_bijection),
        ("DL datum sanity", dl_sanity),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

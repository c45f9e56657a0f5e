use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use serde_json::Value;

use hmlcause::causality::default_bound;
use hmlcause::composition::{Theorem, Verdict};
use hmlcause::hml::{parse_formula, EffectContext};
use hmlcause::lts::{isomorphic, parse_aut, Word};
use hmlcause::testkit::{fixtures, pair_instance};
use hmlcause::{causal_projection, causes};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn manifest() -> Value {
    serde_json::from_str(&fs::read_to_string(dir().join("manifest.json")).unwrap()).unwrap()
}

fn flat(w: &Word) -> String {
    w.iter().map(|l| l.name()).collect()
}

#[test]
fn files_match_the_builtin_systems() {
    let builtin = fixtures();
    let m = manifest();
    let entries = m["fixtures"].as_array().unwrap();
    assert_eq!(entries.len(), builtin.len());
    for e in entries {
        let name = e["name"].as_str().unwrap();
        let fx = &builtin[name];
        let lts = parse_aut(&fs::read_to_string(dir().join(e["lts"].as_str().unwrap())).unwrap()).unwrap();
        let phi = parse_formula(&fs::read_to_string(dir().join(e["effect"].as_str().unwrap())).unwrap()).unwrap();
        assert!(isomorphic(&lts, &fx.lts).is_some(), "{name}");
        assert_eq!(phi, fx.effect, "{name}");
    }
}

#[test]
fn manifest_expectations_hold() {
    for e in manifest()["fixtures"].as_array().unwrap() {
        let name = e["name"].as_str().unwrap();
        let lts = parse_aut(&fs::read_to_string(dir().join(e["lts"].as_str().unwrap())).unwrap()).unwrap();
        let phi = parse_formula(&fs::read_to_string(dir().join(e["effect"].as_str().unwrap())).unwrap()).unwrap();
        let expected = &e["expected"];
        let bound = expected["bound"].as_u64().map_or(default_bound(&lts), |b| b as usize);
        let set = causes(&EffectContext::new(lts, phi).unwrap(), bound);

        let mut got: Vec<(String, Vec<String>)> = set
            .causes
            .iter()
            .map(|c| (flat(&c.core_word()), c.kill_traces.iter().map(flat).collect()))
            .collect();
        let mut want: Vec<(String, Vec<String>)> = expected["causes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| {
                let kills = c["kills"].as_array().unwrap().iter().map(|k| k.as_str().unwrap().to_string());
                (c["core"].as_str().unwrap().to_string(), kills.collect())
            })
            .collect();
        for (_, kills) in got.iter_mut().chain(want.iter_mut()) {
            kills.sort();
        }
        got.sort();
        want.sort();
        assert_eq!(got, want, "{name}");
        if let Some(imm) = expected["immediate"].as_bool() {
            assert_eq!(set.immediate, imm, "{name}");
        }
        if let Some(ex) = expected["exactness"].as_str() {
            assert_eq!(set.exactness.as_str(), ex, "{name}");
        }
    }
}

#[test]
fn right_component_projection_keeps_d_and_e() {
    let fx = &fixtures()["pair_right"];
    let p = causal_projection(&EffectContext::new(fx.lts.clone(), fx.effect.clone()).unwrap(), 4);
    let used: BTreeMap<String, usize> = p.transitions().fold(BTreeMap::new(), |mut m, (_, l, _)| {
        *m.entry(l.name().to_string()).or_default() += 1;
        m
    });
    assert_eq!(used, BTreeMap::from([("d".to_string(), 1), ("e".to_string(), 1)]));
}

#[test]
fn composition_block_holds() {
    let m = manifest();
    let c = &m["composition"];
    let bound = c["bound"].as_u64().unwrap() as usize;
    let inst = pair_instance();
    for (theorem, key) in [(Theorem::Disjunction, "disjunction"), (Theorem::Conjunction, "conjunction")] {
        let report = inst.verify(theorem, bound);
        assert_eq!(report.verdict.as_str(), c[key].as_str().unwrap());
        assert_eq!(report.verdict, Verdict::Holds);
    }
}

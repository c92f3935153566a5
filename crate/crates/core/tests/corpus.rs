use std::path::PathBuf;

use proptest::prelude::*;
use rand::SeedableRng;

use qtorus::lattice;
use qtorus::report::CenterDescription;
use qtorus::verify;
use qtorus::{analyze, CoeffField, CommutationData, Config, Exponent, FieldSpec, StructureReport};

fn corpus_configs() -> Vec<(String, Config)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/configs");
    let mut out: Vec<(String, Config)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, Config::load(&p).unwrap())
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn golden(name: &str) -> Option<String> {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("corpus/golden/{name}.report.json"));
    std::fs::read_to_string(p).ok()
}

#[test]
fn every_valid_config_has_a_matching_golden_report() {
    for (name, config) in corpus_configs() {
        match analyze(&config) {
            Ok(report) => {
                let want = golden(&name).unwrap_or_else(|| panic!("{name}: no golden report"));
                assert_eq!(report.to_json(), want, "{name}");
                assert_eq!(StructureReport::from_json(&want).unwrap(), report, "{name}");
                assert_eq!(analyze(&config).unwrap(), report, "{name}: not deterministic");
            }
            Err(_) => assert!(golden(&name).is_none(), "{name}: invalid config with a golden report"),
        }
    }
}

#[test]
fn reports_respect_one_directional_flags() {
    for (name, config) in corpus_configs() {
        let Ok(r) = analyze(&config) else { continue };
        assert_eq!(r.pi_degree * r.pi_degree, r.image_cardinality, "{name}");
        if r.ufr_l || r.ufr_r {
            assert!(r.positive_diagonal, "{name}");
        }
        match (&r.center_of_l, r.positive_diagonal) {
            (CenterDescription::LaurentSeries { generators }, true) => assert_eq!(generators, &r.s_basis),
            (CenterDescription::UnknownForm, false) => {
                assert!(r.warnings.iter().any(|w| w.starts_with("criterion not met")), "{name}")
            }
            other => panic!("{name}: {other:?}"),
        }
    }
}

#[test]
fn central_coordinates_agree_with_word_ordering_on_corpus() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(42);
    for (name, config) in corpus_configs() {
        let Ok(ring) = config.ring() else { continue };
        let basis = lattice::kernel_lattice(ring.cd());
        for _ in 0..10 {
            let m: Vec<i64> = (0..ring.n()).map(|_| rand::Rng::gen_range(&mut rng, -2..=2)).collect();
            verify::check_central_coordinates(&ring, &basis, &m).unwrap_or_else(|e| panic!("{name} {m:?}: {e}"));
        }
    }
}

#[allow(clippy::needless_range_loop)]
fn config_strategy() -> impl Strategy<Value = Config> {
    (1usize..=4, 1u64..=9).prop_flat_map(|(n, ell)| {
        proptest::collection::vec(0..ell as i64, n * (n - 1) / 2).prop_map(move |upper| {
            let mut h = vec![vec![0i64; n]; n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let v = it.next().unwrap();
                    h[i][j] = v;
                    h[j][i] = -v;
                }
            }
            Config::new(n, ell, h)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn witness_is_central_and_off_the_diagonal_lattice(config in config_strategy()) {
        let r = analyze(&config).unwrap();
        let (cd, _) = config.commutation().unwrap();
        match &r.witness {
            Some(w) => {
                prop_assert!(!r.positive_diagonal);
                prop_assert!(cd.is_central_exponent(&Exponent(w.clone())).unwrap());
                prop_assert!(w.iter().zip(&r.lambdas).any(|(x, &l)| x % l as i64 != 0));
            }
            None => {
                prop_assert!(r.positive_diagonal);
                prop_assert_eq!(r.lambdas.iter().product::<u64>(), r.image_cardinality);
            }
        }
    }

    #[test]
    fn scaled_presentation_gives_same_commutation_scalars(
        config in config_strategy(),
        c in 2u64..=3,
        s in proptest::collection::vec(-5i64..=5, 4),
        t in proptest::collection::vec(-5i64..=5, 4),
    ) {
        let (cd, _) = config.commutation().unwrap();
        let n = cd.n();
        let (s, t) = (Exponent(s[..n].to_vec()), Exponent(t[..n].to_vec()));
        let scaled: CommutationData = cd.scaled(c);
        // ε_ell = ε_{c·ell}^c inside Q(ζ_{c·ell})
        let big = CoeffField::new(FieldSpec::cyclotomic(c * cd.ell())).unwrap();
        let direct = big.root_power(scaled.sigma_exponent(&s, &t).unwrap() as i64);
        let via_small = big.root_power(c as i64 * cd.sigma_exponent(&s, &t).unwrap() as i64);
        prop_assert_eq!(direct, via_small);
        let r = analyze(&config).unwrap();
        let rs = analyze(&Config::new(n, c * cd.ell(), scaled.h().to_vec())).unwrap();
        prop_assert_eq!(r.s_basis, rs.s_basis);
        prop_assert_eq!(r.pi_degree, rs.pi_degree);
        prop_assert_eq!(r.positive_diagonal, rs.positive_diagonal);
    }
}

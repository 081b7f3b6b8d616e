mod common;

use std::path::PathBuf;

use common::graph;
use digifix::generate::{generate, FAMILIES};
use digifix::io::{image_canonical, image_to_string, map_to_string, parse_map};
use digifix::{fixed_point_spectrum, load_image, load_map, parse_image, product, save_image, Error, SelfMap};
use proptest::prelude::*;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("digifix-files-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn params(family: &str) -> Vec<Vec<i64>> {
    match family {
        "interval" => vec![vec![0, 0], vec![-2, 3], vec![1, 6]],
        "cycle" => (1..=9).map(|n| vec![n]).collect(),
        "box" => vec![vec![1, 1, 1], vec![2, 3, 1], vec![3, 3, 2]],
        _ => vec![vec![]],
    }
}

#[test]
fn every_preset_round_trips_through_a_file() {
    for family in FAMILIES {
        for p in params(family) {
            let img = generate(family, &p).unwrap();
            let path = scratch(&format!("{family}-{p:?}.json"));
            save_image(&path, &img).unwrap();
            let back = load_image(&path).unwrap();
            assert_eq!(back, img, "{family} {p:?}");
            assert_eq!(image_canonical(&back), image_canonical(&img));
            std::fs::remove_file(&path).unwrap();
        }
    }
}

#[test]
fn maps_round_trip_through_a_file() {
    let img = generate("fig_sexample", &[]).unwrap();
    let f = SelfMap::constant(&img, 3).unwrap();
    let path = scratch("map.json");
    std::fs::write(&path, map_to_string(&f)).unwrap();
    assert_eq!(load_map(&path, &img).unwrap(), f);
    std::fs::remove_file(&path).unwrap();
    let short = r#"{"format":"digifix-map/1","targets":[0,1]}"#;
    assert!(parse_map(short, &img).is_err());
}

#[test]
fn missing_file_is_an_error() {
    let err = load_image(scratch("absent.json")).unwrap_err();
    assert!(matches!(err, Error::Io(_) | Error::Parse { .. }), "{err:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn explicit_images_round_trip(g in graph(9)) {
        let back = parse_image(&image_to_string(&g)).unwrap();
        prop_assert_eq!(&back, &g);
    }

    #[test]
    fn products_round_trip(a in graph(3), b in graph(3), u in 1usize..=2) {
        let p = product(&[a, b], u).unwrap();
        let back = parse_image(&image_to_string(&p)).unwrap();
        prop_assert_eq!(fixed_point_spectrum(&back).unwrap().0, fixed_point_spectrum(&p).unwrap().0);
        prop_assert_eq!(back, p);
    }
}

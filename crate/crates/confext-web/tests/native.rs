use confext_web::{classify_json, ext_json, vir_grid};

#[test]
fn ext_query() {
    let v = ext_json("vir", "M(0,0)", "M(0,1)").unwrap();
    assert_eq!(v["ext_dim"], 3);
    assert!(ext_json("vir", "M(0", "M(0,1)").is_err());
}

#[test]
fn grid_marks_the_known_pairs() {
    let v = vir_grid("2/3", -4, 5).unwrap();
    let at = |delta: i64, dbar: i64| v["grid"][(delta + 4) as usize][(dbar + 4) as usize].as_u64().unwrap();
    assert_eq!(at(3, 3), 2);
    assert_eq!(at(1, 0), 3);
    assert_eq!(at(5, 0), 1);
    assert_eq!(at(1, -4), 1);
    assert_eq!(at(2, 0), 1);
    assert_eq!(at(5, 1), 1);
    assert_eq!(at(5, -1), 0);
    assert_eq!(at(1, 2), 0);
    assert_eq!(at(0, 3), 0);
    assert!(vir_grid("0", 0, 40).is_err());
}

#[test]
fn classify_by_degree() {
    let v = classify_json(5, 8).unwrap();
    assert_eq!(v[0]["identically_satisfiable"], true);
    assert_eq!(v[1]["roots"].as_array().unwrap().len(), 2);
    assert_eq!(v[2]["condition"], "2*x^2 + 10*x + 3");
    assert_eq!(v[3]["roots"].as_array().unwrap().len(), 0);
    assert!(classify_json(2, 4).is_err());
}

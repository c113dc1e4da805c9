use nodal_core::algebra::{rat, ratio};
use nodal_core::nodepoly::{count_nodal, node_polynomials, severi_table, SurfaceFamily};
use nodal_core::toric::{parse_surface_json, LibraryVariant};
use nodal_core::{Config, NodalError, Rational};

fn plane_n2(d: i64) -> Rational {
    ratio(3, 2) * rat((d - 1) * (d - 2) * (3 * d * d - 3 * d - 11))
}

fn plane_n3(d: i64) -> Rational {
    let c = [
        ratio(525, 1),
        ratio(-829, 2),
        ratio(-229, 1),
        ratio(423, 2),
        ratio(9, 2),
        ratio(-27, 1),
        ratio(9, 2),
    ];
    c.iter()
        .rev()
        .fold(rat(0), |acc, a| acc * rat(d) + a)
}

#[test]
fn plane_curves_match_classical_counts() {
    let polys = node_polynomials(&Config::default(), 4, LibraryVariant::Primary, None).unwrap();
    let degrees: Vec<i64> = (3..=8).collect();
    let rows = severi_table(&SurfaceFamily::ProjectivePlane { degrees }, &polys);
    for row in &rows {
        let d: i64 = row.surface[3..row.surface.len() - 1].parse().unwrap();
        let expected = match row.delta {
            0 => Some(rat(1)),
            1 => Some(rat(3 * (d - 1) * (d - 1))),
            2 => Some(plane_n2(d)),
            3 => Some(plane_n3(d)),
            _ => None,
        };
        if let Some(e) = expected {
            assert_eq!(row.count, e, "{} δ = {}", row.surface, row.delta);
        }
    }
    let quartic = rows.iter().find(|r| r.surface == "P2(4)" && r.delta == 4).unwrap();
    assert_eq!(quartic.count, rat(666));
    let quintic = rows.iter().find(|r| r.surface == "P2(5)" && r.delta == 4).unwrap();
    assert_eq!(quintic.count, rat(36975));
    let cubic = rows.iter().find(|r| r.surface == "P2(3)" && r.delta == 3).unwrap();
    assert_eq!(cubic.count, rat(15));
}

#[test]
fn quadric_discriminant_degree() {
    let polys = node_polynomials(&Config::default(), 1, LibraryVariant::Primary, None).unwrap();
    let bidegrees = vec![(1, 1), (2, 2), (2, 3), (3, 5)];
    for row in severi_table(&SurfaceFamily::Quadric { bidegrees: bidegrees.clone() }, &polys[1..]) {
        let (a, b) = bidegrees
            .iter()
            .copied()
            .find(|(a, b)| row.surface == format!("P1xP1({a},{b})"))
            .unwrap();
        assert_eq!(row.count, rat(6 * a * b - 4 * a - 4 * b + 4), "{}", row.surface);
    }
}

#[test]
fn surface_file_counts() {
    let polys = node_polynomials(&Config::default(), 1, LibraryVariant::Primary, None).unwrap();
    let cubic = parse_surface_json(r#"{"name": "cubic", "polygon": [[0,0],[3,0],[0,3]]}"#, "inline").unwrap();
    let c = count_nodal(&polys[1], &cubic);
    assert_eq!(c.value, rat(12));
    assert!(c.advisory.is_none_or(|a| a.is_clear()));

    let union = parse_surface_json(
        r#"{"union": [[[0,0],[1,0],[0,1]], [[0,0],[1,0],[1,1],[0,1]]]}"#,
        "inline",
    )
    .unwrap();
    assert_eq!(union.components().len(), 2);
}

#[test]
fn malformed_surface_files_report_context() {
    let cases = [
        (r#"{"polygon": [[0,0],[1,0]]}"#, "polygon"),
        (r#"{"polygon": [[0,0],[1,"a"],[0,1]]}"#, "polygon"),
        (r#"{"polygon": [[0,0],[1,0],[0,1]], "extra": 1}"#, "line"),
        (r#"{"name": "x"}"#, "top level"),
        (r#"{"union": []}"#, "union"),
    ];
    for (text, needle) in cases {
        match parse_surface_json(text, "bad.json") {
            Err(e @ NodalError::Parse { .. }) => {
                let msg = e.to_string();
                assert!(msg.contains("bad.json") && msg.contains(needle), "{msg}");
                assert_eq!(e.exit_code(), 2);
            }
            other => panic!("{text}: expected parse error, got {other:?}"),
        }
    }
}

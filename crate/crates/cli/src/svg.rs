//! SVG preview of a chain: piece bodies, kernel balls and the polygon
//! outline when there is one.

use std::fmt::Write;

use pwlab_core::geometry::{Ball, Chain, Domain, Shape};

const SIZE: f64 = 480.0;
const COLOURS: [&str; 6] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#b07aa1"];

pub fn render(chain: &Chain<f64>, stamp: &str) -> String {
    let (lo, hi) = chain.omega().bounding_box();
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let pad = 0.05 * span;
    let scale = SIZE / (span + 2.0 * pad);
    let map = |x: f64, y: f64| ((x - lo[0] + pad) * scale, (hi[1] + pad - y) * scale);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "<!-- {} -->", stamp.trim_start_matches("# "));
    if let Some(poly) = chain.omega().as_polygon() {
        let pts: Vec<String> = poly
            .vertices()
            .iter()
            .map(|&[x, y]| {
                let (u, v) = map(x, y);
                format!("{u:.3},{v:.3}")
            })
            .collect();
        let _ = writeln!(s, r#"<polygon points="{}" fill="none" stroke="black" stroke-width="2"/>"#, pts.join(" "));
    }
    for (i, piece) in chain.pieces().iter().enumerate() {
        let colour = COLOURS[i % COLOURS.len()];
        body(&mut s, piece.body(), colour, &map, scale);
        kernel(&mut s, piece.kernel(), colour, &map, scale);
    }
    s.push_str("</svg>\n");
    s
}

fn body(s: &mut String, d: &Domain<f64>, colour: &str, map: &impl Fn(f64, f64) -> (f64, f64), scale: f64) {
    match d.shape() {
        Shape::Ball(b) => {
            let c = b.center().coords();
            let (u, v) = map(c[0], c[1]);
            let _ = writeln!(
                s,
                r#"<circle cx="{u:.3}" cy="{v:.3}" r="{:.3}" fill="{colour}" fill-opacity="0.25" stroke="{colour}"/>"#,
                b.radius() * scale
            );
        }
        Shape::Polygon(p) => {
            let pts: Vec<String> = p
                .vertices()
                .iter()
                .map(|&[x, y]| {
                    let (u, v) = map(x, y);
                    format!("{u:.3},{v:.3}")
                })
                .collect();
            let _ = writeln!(
                s,
                r#"<polygon points="{}" fill="{colour}" fill-opacity="0.25" stroke="{colour}"/>"#,
                pts.join(" ")
            );
        }
        Shape::Union(_) => {
            for leaf in d.leaves() {
                body(s, leaf, colour, map, scale);
            }
        }
    }
}

fn kernel(s: &mut String, b: &Ball<f64>, colour: &str, map: &impl Fn(f64, f64) -> (f64, f64), scale: f64) {
    let c = b.center().coords();
    let (u, v) = map(c[0], c[1]);
    let _ = writeln!(
        s,
        r#"<circle cx="{u:.3}" cy="{v:.3}" r="{:.3}" fill="none" stroke="{colour}" stroke-dasharray="4 3"/>"#,
        b.radius() * scale
    );
}

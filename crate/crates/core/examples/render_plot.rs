//! Renders a labelled scatter plot with cluster hulls to stdout.

use qvord::cluster::{kmeans, PointSet, Variant};
use qvord::pipeline::{render_scatter_with, LabeledPoint, PlotText};

fn main() -> qvord::Result<()> {
    let raw = [
        ("p", 0.2, 0.9),
        ("q", 0.3, 0.7),
        ("r", 0.9, 1.4),
        ("s", 1.1, 1.2),
        ("t", 1.6, 0.1),
    ];
    let points: Vec<LabeledPoint> = raw
        .iter()
        .map(|&(id, x, y)| LabeledPoint::new(id, x, y))
        .collect();
    let set = PointSet::new(
        raw.iter().map(|&(_, x, y)| vec![x, y]).collect(),
        raw.iter().map(|&(id, ..)| id.to_string()).collect(),
    )?;
    let clusters = kmeans(&set, 2, Variant::Lloyd, 1, 10)?;
    let text = PlotText {
        title: "Two groups".into(),
        x_label: "I".into(),
        y_label: "S".into(),
    };
    print!(
        "{}",
        render_scatter_with(&points, Some(&clusters), true, &text)?
    );
    Ok(())
}

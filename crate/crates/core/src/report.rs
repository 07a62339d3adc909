use serde::{Deserialize, Serialize};

use crate::dset::DeltaSet;
use crate::homology::{all_homology, connectivity_from_reduced, Connectivity, DegreeHomology};

#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    pub homology: bool,
    /// Highest degree to report; defaults to the dimension.
    pub up_to: Option<usize>,
    pub reduced: bool,
}

/// Summary of a constructed space. Field order is the JSON key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceReport {
    pub name: String,
    pub expression: String,
    pub f_vector: Vec<usize>,
    pub euler: i64,
    /// Only computed together with homology.
    pub connectivity: Option<Connectivity>,
    pub homology: Vec<DegreeHomology>,
}

impl SpaceReport {
    pub fn build(name: &str, expression: &str, d: &DeltaSet, opts: &ReportOptions) -> Self {
        let mut report = SpaceReport {
            name: name.to_string(),
            expression: expression.to_string(),
            f_vector: d.f_vector(),
            euler: d.euler_characteristic(),
            connectivity: None,
            homology: Vec::new(),
        };
        if opts.homology {
            let top = d.num_dims().saturating_sub(1);
            let up_to = opts.up_to.unwrap_or(top);
            let reduced = all_homology(d, up_to.max(top), true);
            report.connectivity = Some(connectivity_from_reduced(d, &reduced[..d.num_dims()]));
            report.homology = reduced
                .iter()
                .take(up_to + 1)
                .enumerate()
                .map(|(k, h)| {
                    let mut h = h.clone();
                    if k == 0 && !opts.reduced && !d.is_empty() {
                        h.betti += 1;
                    }
                    DegreeHomology::new(k, &h)
                })
                .collect();
        }
        report
    }

    /// Euler characteristic from the f-vector matches the alternating Betti
    /// sum. Needs homology in every degree up to the dimension.
    pub fn is_consistent(&self, reduced: bool) -> bool {
        if self.homology.len() < self.f_vector.len() {
            return false;
        }
        let chi: i64 = self
            .homology
            .iter()
            .map(|h| if h.dim % 2 == 0 { h.betti as i64 } else { -(h.betti as i64) })
            .sum();
        let shift = if reduced && !self.f_vector.is_empty() { 1 } else { 0 };
        chi + shift == self.euler
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn f_vector_csv(&self) -> String {
        let mut s = String::from("dim,count\n");
        for (k, c) in self.f_vector.iter().enumerate() {
            s.push_str(&format!("{k},{c}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_report() {
        let s = DeltaSet::sphere(2).unwrap();
        let r = SpaceReport::build("S2", "sphere 2", &s, &ReportOptions { homology: true, ..Default::default() });
        assert_eq!(r.f_vector, vec![6, 12, 8]);
        assert_eq!(r.euler, 2);
        assert_eq!(r.connectivity, Some(Connectivity::Finite(1)));
        assert_eq!(r.homology.len(), 3);
        assert!(r.is_consistent(false));
        let red = SpaceReport::build("S2", "sphere 2", &s, &ReportOptions { homology: true, reduced: true, up_to: None });
        assert_eq!(red.homology[0].betti, 0);
        assert!(red.is_consistent(true));
    }

    #[test]
    fn json_key_order() {
        let r = SpaceReport::build("pt", "point", &DeltaSet::point(), &ReportOptions::default());
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(
            text,
            r#"{"name":"pt","expression":"point","f_vector":[1],"euler":1,"connectivity":null,"homology":[]}"#
        );
        assert_eq!(r.f_vector_csv(), "dim,count\n0,1\n");
    }

    #[test]
    fn up_to_beyond_dimension_pads_with_zero() {
        let c = DeltaSet::polygon_circle(3).unwrap();
        let r = SpaceReport::build("c", "circle 3", &c, &ReportOptions { homology: true, up_to: Some(3), reduced: false });
        assert_eq!(r.homology.len(), 4);
        assert_eq!(r.homology[3].betti, 0);
        assert_eq!(r.connectivity, Some(Connectivity::Finite(0)));
    }
}

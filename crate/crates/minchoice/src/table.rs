//! JSON form of the recurrence table.

use minchoice_core::theory::RecurrenceTable;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct PhiEntry {
    pub k: u32,
    pub ln_phi: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeJson {
    pub c1: f64,
    pub c2: f64,
    pub ratios_nonincreasing: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableJson {
    pub m: f64,
    pub alpha: Vec<f64>,
    pub ln_alpha: Vec<f64>,
    pub ln_f: Vec<f64>,
    pub envelope: EnvelopeJson,
    pub c: u64,
    pub k_star_raw: i64,
    pub k_star: u32,
    pub rho_m: Option<u64>,
    pub phi: Vec<PhiEntry>,
    pub reference_curve: Option<f64>,
    pub band: [Option<f64>; 2],
}

impl From<&RecurrenceTable> for TableJson {
    fn from(t: &RecurrenceTable) -> Self {
        Self {
            m: t.m,
            alpha: t.alpha.clone(),
            ln_alpha: t.ln_alpha.clone(),
            ln_f: t.ln_f.clone(),
            envelope: EnvelopeJson {
                c1: t.envelope.c1,
                c2: t.envelope.c2,
                ratios_nonincreasing: t.envelope.decreasing,
            },
            c: t.c,
            k_star_raw: t.k_star_raw,
            k_star: t.k_star,
            rho_m: t.rho_m,
            phi: t.phi_log.iter().map(|&(k, ln_phi)| PhiEntry { k, ln_phi }).collect(),
            reference_curve: t.reference_curve,
            band: [
                t.reference_curve.map(|c| c - f64::from(t.band_below)),
                t.reference_curve.map(|c| c + f64::from(t.r_emp)),
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serializes() {
        let t = RecurrenceTable::build(1e6, 12).unwrap();
        let json = serde_json::to_value(TableJson::from(&t)).unwrap();
        assert_eq!(json["c"], 101);
        assert_eq!(json["k_star"], 1);
        assert_eq!(json["alpha"].as_array().unwrap().len(), 12);
        assert_eq!(json["alpha"][0], 2.0);
        let band = json["band"].as_array().unwrap();
        assert!((band[1].as_f64().unwrap() - band[0].as_f64().unwrap() - 11.0).abs() < 1e-12);
    }
}

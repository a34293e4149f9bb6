//! Aligned plain-text rendering of reports.

use std::fmt::Write;

use crate::selmer::EulerCharReport;
use crate::tate::LocalReductionData;

/// Left-aligned columns separated by two spaces.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = line(headers.iter().map(|s| s.to_string()).collect());
    out.push('\n');
    out.push_str(&line(widths.iter().map(|w| "-".repeat(*w)).collect()));
    for row in rows {
        out.push('\n');
        out.push_str(&line(row.clone()));
    }
    out.push('\n');
    out
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or("-".into(), |v| v.to_string())
}

pub fn local_data_rows(data: &[(String, &LocalReductionData)]) -> String {
    let rows: Vec<Vec<String>> = data
        .iter()
        .map(|(label, d)| {
            vec![
                label.clone(),
                d.place.e.to_string(),
                d.place.f.to_string(),
                d.kodaira.to_string(),
                d.reduction_class.to_string(),
                d.c_v.to_string(),
                d.v_min_delta.to_string(),
                d.conductor_exponent.to_string(),
                d.q_v.to_string(),
                opt(&d.n_v),
                d.l_at_1.to_string(),
                d.potentially_good.to_string(),
            ]
        })
        .collect();
    table(&["place", "e", "f", "kodaira", "class", "c_v", "v(disc)", "cond", "q_v", "N_v", "L_v(E,1)", "pot_good"], &rows)
}

pub fn report_text(r: &EulerCharReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "curve [{}]  p = {}  F = Q(mu_{})  [F:Q] = {}", r.curve.join(","), r.prime, r.conductor, r.field_degree);
    let _ = writeln!(out, "status {} (exit {})\n", serde_json::to_value(r.status).unwrap().as_str().unwrap(), r.exit_code());

    out.push_str("hypotheses\n");
    let rows: Vec<Vec<String>> =
        r.hypotheses.iter().map(|h| vec![h.id.to_string(), h.status.to_string(), h.detail.clone()]).collect();
    out.push_str(&table(&["clause", "status", "detail"], &rows));

    let m: Vec<String> = r.m_rational.iter().map(|l| l.to_string()).collect();
    let _ = writeln!(out, "\nM (rational) = {{{}}}, {} place(s) of F", m.join(", "), r.m_places.len());
    let ram: Vec<String> = r.ramified_places.iter().map(|p| p.to_string()).collect();
    let _ = writeln!(out, "ramified places: {}\n", ram.join(" "));

    out.push_str("places of F\n");
    let places: Vec<(String, &LocalReductionData)> = r.places.iter().map(|e| (e.place.to_string(), &e.data)).collect();
    out.push_str(&local_data_rows(&places));

    if let Some(t) = &r.torsion {
        let _ = writeln!(
            out,
            "\ntorsion #E(F)({}): lower {} upper {} exact {} certified {} ({} primes)",
            t.p,
            t.lower,
            t.upper,
            t.exact,
            t.certified,
            t.sampled_primes.len()
        );
    }
    if let Some(rho) = &r.rho {
        let d = &rho.decomposition;
        let _ = writeln!(
            out,
            "rho exponent {} interval [{}, {}]: sha {} torsion [{}, {}] tamagawa {} reduction above p {}",
            opt(&rho.exponent),
            rho.interval.0,
            rho.interval.1,
            d.sha,
            d.torsion.0,
            d.torsion.1,
            d.tamagawa,
            d.reduction_above_p
        );
    }
    let c = &r.chi;
    let _ = writeln!(
        out,
        "chi_cyc = {}^{}  chi_Sigma = {}^{}  (M contributes {})",
        c.base,
        opt(&c.chi_cyc_exponent),
        c.base,
        opt(&c.chi_sigma_exponent),
        c.m_contribution
    );
    if let Some(reason) = &c.suppressed_reason {
        let _ = writeln!(out, "suppressed: {reason}");
    }

    out.push_str("\nEuler factor audit over M\n");
    let rows: Vec<Vec<String>> = r
        .audit
        .iter()
        .map(|a| {
            vec![
                a.place.to_string(),
                a.kodaira.clone(),
                a.reduction_class.to_string(),
                opt(&a.n_v),
                a.l_at_1.to_string(),
                a.abs_p_exponent.to_string(),
            ]
        })
        .collect();
    out.push_str(&table(&["place", "kodaira", "class", "N_v", "L_v(E,1)", "|L|_p exp"], &rows));

    let _ = writeln!(out, "\ntau_p = {}  corank window ({}, {}){}", r.tau_p, r.corank.window.0, r.corank.window.1, if r.corank.pinned { " pinned" } else { "" });
    if let Some(p) = &r.corank.predictions {
        let _ = writeln!(out, "predictions: global {} local {} conjectural {}", p.global_h1, p.local_sum, p.conjectural_rank);
    }
    out.push_str("\nkernel orders of gamma_v\n");
    let rows: Vec<Vec<String>> = r
        .gamma_kernels
        .iter()
        .map(|g| vec![g.place.to_string(), g.a_potentially_good.to_string(), g.kernel_exponent.to_string()])
        .collect();
    out.push_str(&table(&["place", "A pot_good", "exponent"], &rows));
    if let Some(e) = &r.expected {
        let _ = writeln!(out, "\nexpected chi_Sigma exponent {} computed {} match {}", e.chi_sigma_exponent, opt(&e.computed), e.matches);
    }
    out
}

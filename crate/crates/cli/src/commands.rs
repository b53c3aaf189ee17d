use diaglab_core::catalog;
use diaglab_core::expr::{expand, expand_laurent, ExprError};
use diaglab_core::grade::{grade_bounds, verify_diagonal_rep, verify_hadamard_rep, zero_divisor_witness, DiagonalRep, HadamardRep, Witness};
use diaglab_core::hypergeom::{contract, height, hg_coeffs, hg_operator, jordan_at_infinity, jordan_at_zero, FactorSide};
use diaglab_core::odelocal::{frobenius_basis, guess_operator, indicial, nil_index, nil_index_with_window, OpForm};
use diaglab_core::series::{constant_term_series, diagonal, dmap, hadamard_all, section};
use diaglab_core::{suite, Rational, UniSeries};
use serde_json::{json, to_value, Value};

use crate::args::{CatalogCommand, Command, FormArg, GradeCommand, GuessArgs, HgCommand, OdeCommand, Point};
use crate::{input, Failure, Output};

fn value(x: &impl serde::Serialize) -> Value {
    to_value(x).expect("library types serialize")
}

fn strings(qs: &[Rational]) -> Vec<String> {
    qs.iter().map(ToString::to_string).collect()
}

fn series_out(s: &UniSeries) -> Output {
    Output::with_text(value(s), s.to_string())
}

pub fn run(cmd: Command) -> Result<Output, Failure> {
    match cmd {
        Command::Expand { expr, arity, cap_all, cap, low } => {
            let (e, arity) = input::expression(&expr, arity)?;
            let cap = match (cap_all, cap) {
                (Some(c), _) => vec![c; arity],
                (None, Some(c)) => c,
                (None, None) => return Err(Failure::Usage("give --order or --cap".into())),
            };
            if cap.len() != arity {
                return Err(ExprError::ArityMismatch { expected: arity, found: cap.len() }.into());
            }
            let ms = match low {
                Some(low) => expand_laurent(&e, &low, &cap)?,
                None => expand(&e, &cap)?,
            };
            Ok(Output::json(value(&ms)))
        }
        Command::Diag { expr, multi_file, n, order } => {
            let ms = match (expr, multi_file) {
                (Some(text), _) => {
                    let order = order.ok_or_else(|| Failure::Usage("--expr needs --order".into()))?;
                    let (e, _) = input::expression(&text, Some(n + 1))?;
                    expand(&e, &vec![order as i64; n + 1])?
                }
                (None, Some(p)) => input::multi_file(&p)?,
                (None, None) => return Err(Failure::Usage("give --expr or --multi-file".into())),
            };
            let d = diagonal(&ms, n)?;
            let d = match order {
                Some(o) if o < d.trunc() => d.truncate(o),
                _ => d,
            };
            Ok(series_out(&d))
        }
        Command::Hadamard { series_files } => {
            let all = series_files.iter().map(|p| input::series_file(p)).collect::<Result<Vec<_>, _>>()?;
            Ok(series_out(&hadamard_all(&all).expect("clap requires one file")))
        }
        Command::Section { source, order, r, m } => {
            let f = input::series(&source, order)?;
            Ok(series_out(&section(&f, r, m)?))
        }
        Command::Dmap { expr, multi_file, arity, order } => {
            let ms = match (expr, multi_file) {
                (Some(text), _) => {
                    let order = order.ok_or_else(|| Failure::Usage("--expr needs --order".into()))?;
                    let (e, arity) = input::expression(&text, arity)?;
                    expand(&e, &vec![order; arity])?
                }
                (None, Some(p)) => input::multi_file(&p)?,
                (None, None) => return Err(Failure::Usage("give --expr or --multi-file".into())),
            };
            Ok(Output::json(value(&dmap(&ms)?)))
        }
        Command::Cts { expr, order } => {
            let (e, _) = input::expression(&expr, None)?;
            Ok(series_out(&constant_term_series(&e, order)?))
        }
        Command::Hg(c) => hg(c),
        Command::Ode(c) => ode(c),
        Command::Nil(args) => {
            let f = input::series(&args.source, args.order)?;
            let op = guessed(&f, &args)?;
            let report = nil_index(&op)?;
            let mut j = value(&report);
            j["operator"] = value(&op);
            Ok(Output::with_text(j, format!("nil {} from {} through order {}", report.nil, op.pretty(), f.trunc())))
        }
        Command::Grade(c) => grade(c),
        Command::Catalog(c) => catalog_cmd(c),
        Command::Selfcheck { seed, cases } => {
            let mut reports = vec![suite::annihilation_suite(seed, 50, 40), suite::contraction_suite(seed, 20)];
            reports.extend(suite::section_suites(seed, cases));
            let failed = reports.iter().any(|r| !r.passed());
            let text = reports
                .iter()
                .map(|r| format!("{} {} ({} cases)", if r.passed() { "PASS" } else { "FAIL" }, r.name, r.cases))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Output::with_text(json!({ "seed": seed, "suites": value(&reports) }), text).failed_if(failed))
        }
    }
}

fn guessed(f: &UniSeries, args: &GuessArgs) -> Result<diaglab_core::odelocal::DiffOp, Failure> {
    guess_operator(f, args.max_order, args.max_deg).ok_or_else(|| {
        diaglab_core::grade::GradeError::GuessFailed { max_order: args.max_order, max_deg: args.max_deg, window: f.trunc() }
            .into()
    })
}

fn hg(c: HgCommand) -> Result<Output, Failure> {
    match c {
        HgCommand::Coeffs { params, order } => Ok(series_out(&hg_coeffs(&input::params(&params)?, order)?)),
        HgCommand::Op { params, form } => {
            let op = hg_operator(&input::params(&params)?);
            let op = op.in_form(match form {
                FormArg::Theta => OpForm::Theta,
                FormArg::Dx => OpForm::Dx,
            });
            Ok(Output::with_text(value(&op), op.pretty()))
        }
        HgCommand::Jordan { params, at } => {
            let p = input::params(&params)?;
            let (j, name) = match at {
                Point::Zero => (jordan_at_zero(&p), "0"),
                Point::Infinity => (jordan_at_infinity(&p), "inf"),
            };
            let out = json!({
                "params": p.to_string(),
                "at": name,
                "blocks": value(&j),
                "largestBlock": j.largest_block(),
            });
            Ok(Output::with_text(out, j.pretty()))
        }
        HgCommand::Height { params } => {
            let p = input::params(&params)?;
            let h = height(&p);
            Ok(Output::with_text(json!({ "params": p.to_string(), "height": h }), h.to_string()))
        }
        HgCommand::Contract { params } => {
            let p = input::params(&params)?;
            let c = contract(&p);
            let steps: Vec<Value> = c
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "alpha": s.i + 1,
                        "beta": s.j + 1,
                        "difference": s.diff,
                        "side": match s.side { FactorSide::Left => "left", FactorSide::Right => "right" },
                        "shift": s.shift.to_string(),
                        "shifted": s.shifted(),
                        "factorizationHolds": s.factorization_holds(),
                    })
                })
                .collect();
            let out = json!({
                "params": p.to_string(),
                "alpha": strings(&c.alpha),
                "beta": strings(&c.beta),
                "gammas": strings(&c.gammas),
                "deltas": strings(&c.deltas),
                "steps": steps,
            });
            let text = format!(
                "reduced alpha ({}) beta ({}), gammas ({}), deltas ({})",
                strings(&c.alpha).join(","),
                strings(&c.beta).join(","),
                strings(&c.gammas).join(", "),
                strings(&c.deltas).join(", ")
            );
            Ok(Output::with_text(out, text))
        }
    }
}

fn ode(c: OdeCommand) -> Result<Output, Failure> {
    match c {
        OdeCommand::Indicial { op } => {
            let ind = indicial(&input::operator(&op)?)?;
            let text = format!(
                "{}; roots {}",
                ind.polynomial.display_in("r"),
                ind.roots.iter().map(|(q, m)| format!("{q} (x{m})")).collect::<Vec<_>>().join(", ")
            );
            Ok(Output::with_text(value(&ind), text))
        }
        OdeCommand::Frobenius { op, order } => {
            let basis = frobenius_basis(&input::operator(&op)?, order)?;
            Ok(Output::json(value(&basis)))
        }
        OdeCommand::Nil { op, order } => {
            let op = input::operator(&op)?;
            let report = match order {
                Some(n) => nil_index_with_window(&op, n)?,
                None => nil_index(&op)?,
            };
            Ok(Output::with_text(value(&report), format!("nil {}", report.nil)))
        }
        OdeCommand::Guess(args) => {
            let f = input::series(&args.source, args.order)?;
            match guess_operator(&f, args.max_order, args.max_deg) {
                Some(op) => Ok(Output::with_text(value(&op), op.pretty())),
                None => Ok(Output::with_text(Value::Null, "none".into())),
            }
        }
        OdeCommand::Apply { op, source, order } => {
            let op = input::operator(&op)?;
            let f = input::series(&source, order)?;
            Ok(series_out(&op.apply(&f)?))
        }
    }
}

fn grade(c: GradeCommand) -> Result<Output, Failure> {
    match c {
        GradeCommand::Bounds { guess, witness_file, window } => {
            let f = input::series(&guess.source, guess.order)?;
            let witness: Option<Witness> = witness_file.map(|p| input::read_json(&p)).transpose()?;
            let check = window.unwrap_or(f.trunc());
            let b = grade_bounds(&f, witness.as_ref(), guess.max_order, guess.max_deg, check)?;
            let upper = b.upper.map_or("?".to_string(), |u| u.to_string());
            let text = format!("{} <= dg <= {} through order {}", b.lower, upper, b.window);
            Ok(Output::with_text(value(&b), text))
        }
        GradeCommand::VerifyDiag { source, expr, arity, order } => {
            let f = input::series(&source, Some(order))?;
            let (e, arity) = input::expression(&expr, arity)?;
            let rep = DiagonalRep::new(e, arity)?;
            let ok = verify_diagonal_rep(&rep, &f, order)?;
            let out = json!({ "verified": ok, "window": order, "witness": value(&Witness::Diagonal(rep)) });
            Ok(Output::with_text(out, format!("{ok} through order {order}")).failed_if(!ok))
        }
        GradeCommand::VerifyHad { source, witness_file, order } => {
            let f = input::series(&source, Some(order))?;
            let rep: HadamardRep = input::read_json(&witness_file)?;
            let ok = verify_hadamard_rep(&rep, &f, order)?;
            let out = json!({ "verified": ok, "window": order, "witness": value(&Witness::Hadamard(rep)) });
            Ok(Output::with_text(out, format!("{ok} through order {order}")).failed_if(!ok))
        }
        GradeCommand::Zerodiv { series_files, m, order } => {
            let f = input::series_file(&series_files[0])?;
            let g = input::series_file(&series_files[1])?;
            let n = order.unwrap_or(f.trunc().min(g.trunc()));
            let out = match zero_divisor_witness(&f, &g, m, n) {
                Some(w) => {
                    let text = format!("m = {}, F = {:?}, G = {:?}", w.m, w.f_residues, w.g_residues);
                    let mut j = value(&w);
                    j["found"] = json!(true);
                    j["window"] = json!(n);
                    Output::with_text(j, text)
                }
                None => Output::with_text(json!({ "found": false, "window": n }), "none".into()),
            };
            Ok(out)
        }
    }
}

fn catalog_cmd(c: CatalogCommand) -> Result<Output, Failure> {
    match c {
        CatalogCommand::List => {
            let entries = catalog::entries();
            let text = entries.iter().map(|e| format!("{:<18} {}", e.name, e.description)).collect::<Vec<_>>().join("\n");
            Ok(Output::with_text(value(&entries), text))
        }
        CatalogCommand::Run { name, window } => {
            let e = catalog::entry(&name).ok_or_else(|| Failure::Usage(format!("no catalog entry named {name:?}")))?;
            let v = catalog::run_entry(&e, window)?;
            let upper = v.bounds.upper.map_or("?".to_string(), |u| u.to_string());
            let text = format!(
                "{}: nil {} (expected {}), {} <= dg <= {} through order {}: {}",
                v.entry,
                v.nil,
                v.expected_nil,
                v.bounds.lower,
                upper,
                v.bounds.window,
                if v.passed { "PASS" } else { "FAIL" }
            );
            let failed = !v.passed;
            Ok(Output::with_text(value(&v), text).failed_if(failed))
        }
    }
}

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use juniper_cli::server::{router, ServerConfig};
use juniper_core::{FirstMove, GameResult, GameState, Ruleset};
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> Router {
    router(ServerConfig::default())
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<&str>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header("content-type", "application/json");
    }
    let req = req.body(body.map_or(Body::empty(), |b| Body::from(b.to_owned()))).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, value)
}

async fn get(app: &Router, uri: &str) -> (StatusCode, Value) {
    call(app, Method::GET, uri, None).await
}

async fn post(app: &Router, uri: &str, body: Value) -> (StatusCode, Value) {
    call(app, Method::POST, uri, Some(&body.to_string())).await
}

fn labels(v: &Value) -> Vec<u32> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as u32).collect()
}

/// A served state must replay through the game rules to the same position.
fn assert_replays(state: &Value) {
    let constraint: FirstMove = serde_json::from_value(state["constraint"].clone()).unwrap();
    let rules = Ruleset::new(state["n"].as_u64().unwrap() as u32, constraint).unwrap();
    let replayed = GameState::replay(rules, &labels(&state["moves"])).expect("state replays");
    let result: GameResult = serde_json::from_value(state["result"].clone()).unwrap();
    assert_eq!(GameResult::from(replayed.status()), result);
    assert_eq!(replayed.legal_moves(), labels(&state["legal_moves"]));
    assert_eq!(replayed.current(), state["current"].as_u64().map(|c| c as u32));
}

async fn new_game(app: &Router, n: u32, role: &str) -> (String, Value) {
    let (status, v) = post(app, "/api/v1/games", json!({"n": n, "engine_role": role})).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    assert_replays(&v["state"]);
    (v["id"].as_str().unwrap().to_owned(), v["state"].clone())
}

#[tokio::test]
async fn decomposition_and_openings() {
    let app = app();
    let (status, v) = get(&app, "/api/v1/decomposition/16").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v, json!({"n":16,"d":[4,6,8,9,10,11,13,15,16],"a":[1,2,3,5,12],"c":[7,14]}));

    let (status, v) = get(&app, "/api/v1/openings/100?constraint=even").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["n"], 100);
    assert_eq!(v["constraint"], "even");
    let winning = labels(&v["winning"]);
    assert!(winning.contains(&58) && winning.contains(&62));

    let (_, v) = get(&app, "/api/v1/openings/16").await;
    assert_eq!(v["constraint"], "none");
    assert_eq!(labels(&v["winning"]), [4, 6, 8, 9, 10, 11, 13, 15, 16]);
}

#[tokio::test]
async fn out_of_range_and_malformed_requests() {
    let app = router(ServerConfig { n_limit: 50 });
    assert_eq!(get(&app, "/api/v1/decomposition/51").await.0, StatusCode::NOT_FOUND);
    assert_eq!(get(&app, "/api/v1/decomposition/0").await.0, StatusCode::NOT_FOUND);
    assert_eq!(get(&app, "/api/v1/decomposition/abc").await.0, StatusCode::NOT_FOUND);
    assert_eq!(get(&app, "/api/v1/openings/20?constraint=odd").await.0, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(post(&app, "/api/v1/games", json!({"n": 51})).await.0, StatusCode::NOT_FOUND);
    assert_eq!(get(&app, "/api/v1/games/nope").await.0, StatusCode::NOT_FOUND);
    assert_eq!(get(&app, "/api/v1/games/nope/hint").await.0, StatusCode::NOT_FOUND);

    for bad in [
        r#"{"n": "sixteen"}"#,
        r#"{"n": 16, "engine_role": "third"}"#,
        r#"{"n": 16, "constraint": "odd"}"#,
        r#"{"n": 16, "extra": 1}"#,
        "{not json",
        "",
    ] {
        let (status, _) = call(&app, Method::POST, "/api/v1/games", Some(bad)).await;
        assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{bad}");
    }
    let (id, _) = new_game(&app, 10, "none").await;
    let uri = format!("/api/v1/games/{id}/moves");
    for bad in [r#"{"mov": 3}"#, r#"{"move": -1}"#, "[]"] {
        let (status, _) = call(&app, Method::POST, &uri, Some(bad)).await;
        assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{bad}");
    }
}

#[tokio::test]
async fn engine_first_opens_with_minimal_winning_number() {
    let app = app();
    let (id, state) = new_game(&app, 16, "first").await;
    assert_eq!(state["moves"], json!([4]));
    assert_eq!(state["to_move"], "player2");

    let (status, v) = get(&app, &format!("/api/v1/games/{id}")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["moves"], json!([4]));
    assert_eq!(labels(&v["legal_moves"]), [1, 2, 8, 12, 16]);

    // whatever the human answers, the engine still wins
    let (status, v) = post(&app, &format!("/api/v1/games/{id}/moves"), json!({"move": 1})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["human_move"], 1);
    assert!(v["engine_move"].is_u64());
    assert_replays(&v["state"]);
}

#[tokio::test]
async fn engine_second_answers_seven_with_fourteen() {
    let app = app();
    let (id, state) = new_game(&app, 16, "second").await;
    assert_eq!(state["moves"], json!([]));
    let (status, v) = post(&app, &format!("/api/v1/games/{id}/moves"), json!({"move": 7})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["engine_move"], 14);
    assert_eq!(v["state"]["moves"], json!([7, 14]));
    assert_replays(&v["state"]);

    let (status, hint) = get(&app, &format!("/api/v1/games/{id}/hint")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(hint["exact"], true);
    assert_eq!(hint["winning_moves"], json!([]));
}

#[tokio::test]
async fn illegal_moves_and_finished_games_conflict() {
    let app = app();
    let (id, _) = new_game(&app, 16, "none").await;
    let moves = format!("/api/v1/games/{id}/moves");
    assert_eq!(post(&app, &moves, json!({"move": 9})).await.0, StatusCode::OK);
    assert_eq!(post(&app, &moves, json!({"move": 9})).await.0, StatusCode::CONFLICT);
    assert_eq!(post(&app, &moves, json!({"move": 5})).await.0, StatusCode::CONFLICT);
    assert_eq!(post(&app, &moves, json!({"move": 17})).await.0, StatusCode::CONFLICT);
    // 9 -> 3 -> 1 -> 2 -> 4 -> 8 -> 16, then 16's only free neighbour is gone
    for k in [3, 1, 2, 4, 8, 16] {
        let (status, v) = post(&app, &moves, json!({"move": k})).await;
        assert_eq!(status, StatusCode::OK, "{v}");
        assert_replays(&v["state"]);
    }
    let (_, v) = get(&app, &format!("/api/v1/games/{id}")).await;
    assert_eq!(v["result"], "player1");
    assert_eq!(v["legal_moves"], json!([]));
    assert_eq!(post(&app, &moves, json!({"move": 5})).await.0, StatusCode::CONFLICT);
    assert_eq!(get(&app, &format!("/api/v1/games/{id}/hint")).await.0, StatusCode::CONFLICT);

    let (_, t) = get(&app, &format!("/api/v1/games/{id}/transcript")).await;
    assert_eq!(t["moves"], json!([9, 3, 1, 2, 4, 8, 16]));
    assert_eq!(t["result"], "player1");
}

#[tokio::test]
async fn delete_removes_session() {
    let app = app();
    let (id, _) = new_game(&app, 8, "none").await;
    let uri = format!("/api/v1/games/{id}");
    assert_eq!(call(&app, Method::DELETE, &uri, None).await.0, StatusCode::NO_CONTENT);
    assert_eq!(get(&app, &uri).await.0, StatusCode::NOT_FOUND);
    assert_eq!(call(&app, Method::DELETE, &uri, None).await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn constrained_game_without_openings_is_over_at_once() {
    let app = app();
    let (status, v) =
        post(&app, "/api/v1/games", json!({"n": 3, "constraint": "composite", "engine_role": "first"})).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(v["state"]["result"], "player2");
    assert_eq!(v["state"]["moves"], json!([]));
    assert_replays(&v["state"]);
}

/// Plays the engine against every human reply for small n; the engine must
/// never lose when it is on the winning side and the service never returns 500.
#[tokio::test]
async fn engine_never_loses_over_http() {
    let app = app();
    for n in 1..=9u32 {
        for role in ["first", "second"] {
            let mut stack: Vec<Vec<u32>> = vec![vec![]];
            while let Some(prefix) = stack.pop() {
                let (id, mut state) = new_game(&app, n, role).await;
                for &k in &prefix {
                    let (status, v) = post(&app, &format!("/api/v1/games/{id}/moves"), json!({"move": k})).await;
                    assert_eq!(status, StatusCode::OK, "n={n} {role} {prefix:?}: {v}");
                    state = v["state"].clone();
                }
                assert_replays(&state);
                let engine_side = if role == "first" { "player1" } else { "player2" };
                let opening = state["moves"].get(0).and_then(Value::as_u64);
                let (_, dec) = get(&app, &format!("/api/v1/decomposition/{n}")).await;
                let engine_should_win = match opening {
                    Some(v) => {
                        let in_d = labels(&dec["d"]).contains(&(v as u32));
                        (role == "first") == in_d
                    }
                    None => false,
                };
                if state["result"] != "ongoing" {
                    if engine_should_win {
                        assert_eq!(state["result"], engine_side, "n={n} {role} {:?}", state["moves"]);
                    }
                    continue;
                }
                for k in labels(&state["legal_moves"]) {
                    let mut next = prefix.clone();
                    next.push(k);
                    stack.push(next);
                }
                call(&app, Method::DELETE, &format!("/api/v1/games/{id}"), None).await;
            }
        }
    }
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_sessions_stay_isolated() {
    let app = app();
    let mut handles = Vec::new();
    for t in 0..16u32 {
        let app = app.clone();
        handles.push(tokio::spawn(async move {
            // each client walks its own chain 1 -> p -> 2p ... on G_40
            let (id, _) = new_game(&app, 40, "none").await;
            let p = [3u32, 5, 7, 11][t as usize % 4];
            let mut expected = Vec::new();
            for k in [1, p, 2 * p] {
                let (status, v) = post(&app, &format!("/api/v1/games/{id}/moves"), json!({"move": k})).await;
                assert_eq!(status, StatusCode::OK);
                expected.push(k);
                assert_eq!(labels(&v["state"]["moves"]), expected);
                tokio::task::yield_now().await;
            }
            let (_, v) = get(&app, &format!("/api/v1/games/{id}")).await;
            assert_eq!(labels(&v["moves"]), [1, p, 2 * p]);
            assert_replays(&v);
            id
        }));
    }
    let mut ids = Vec::new();
    for h in handles {
        ids.push(h.await.unwrap());
    }
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), 16);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_moves_on_one_session_are_serialized() {
    let app = app();
    let (id, _) = new_game(&app, 30, "none").await;
    post(&app, &format!("/api/v1/games/{id}/moves"), json!({"move": 1})).await;
    // all race to play 7; exactly one wins
    let mut handles = Vec::new();
    for _ in 0..8 {
        let app = app.clone();
        let uri = format!("/api/v1/games/{id}/moves");
        handles.push(tokio::spawn(async move { post(&app, &uri, json!({"move": 7})).await.0 }));
    }
    let mut ok = 0;
    for h in handles {
        match h.await.unwrap() {
            StatusCode::OK => ok += 1,
            s => assert_eq!(s, StatusCode::CONFLICT),
        }
    }
    assert_eq!(ok, 1);
    let (_, v) = get(&app, &format!("/api/v1/games/{id}")).await;
    assert_eq!(v["moves"], json!([1, 7]));
}

//! HTTP surface.
//!
//! Every exchange is a request in and one JSON [`Envelope`](wire::Envelope)
//! out: the handler reads the store, computes, and answers with
//! `{"ok": true, "data": ...}` or `{"ok": false, "error": {"code", "message"}}`.
//! The notification stream is the one long-lived response; it carries one
//! JSON notification per line (`application/x-ndjson`).
//!
//! | route                               | auth     | result                          |
//! |-------------------------------------|----------|---------------------------------|
//! | `POST /register`, `POST /login`     | -        | [`wire::AuthResponse`]          |
//! | `GET /products`                     | -        | catalog                         |
//! | `GET /shops?lat&lon&radius_km`      | -        | [`wire::ShopHit`] list          |
//! | `GET /shops/{id}`                   | -        | [`wire::ShopView`]              |
//! | `GET /shops/{id}/recommendations`   | -        | [`wire::RuleView`] list         |
//! | `GET /shops/{id}/products`          | -        | [`wire::ProductView`] list      |
//! | `POST /shops/{id}/products`         | owner    | [`wire::ProductView`]           |
//! | `POST /orders`                      | customer | [`wire::OrderView`]             |
//! | `GET /orders/{id}`                  | party    | [`wire::OrderView`]             |
//! | `GET /shops/{id}/orders/pending`    | owner    | [`wire::OrderView`] list        |
//! | `POST /orders/{id}/confirm`         | owner    | [`wire::DecisionView`]          |
//! | `POST /orders/{id}/decline`         | owner    | [`wire::DecisionView`]          |
//! | `GET /notifications/stream?after`   | any      | NDJSON of notifications         |

pub mod cache;
pub mod session;
pub mod wire;

use std::convert::Infallible;
use std::future::Future;
use std::sync::Arc;
use std::time::Duration;

use axum::body::{Body, Bytes};
use axum::extract::{FromRequest, FromRequestParts, Path, Query, Request, State};
use axum::http::{header, request::Parts, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use shopnear_core::{
    shops_within, GeoPoint, MiningConfig, NotificationId, OrderId, ProductId, ShopId, UserId, DEFAULT_RADIUS_KM,
};
use tokio::net::TcpListener;
use tokio::sync::watch;

use crate::auth;
use crate::error::Error;
use crate::model::Role;
use crate::orders::Orders;
use crate::recommend::mine_shop_output;
use crate::store::Store;
use cache::RecommendationCache;
use session::Sessions;
use wire::*;

#[derive(Clone, Debug)]
pub struct ApiSettings {
    pub mining: MiningConfig,
    pub default_radius_km: f64,
    pub cache_ttl: Duration,
}

impl Default for ApiSettings {
    fn default() -> Self {
        ApiSettings {
            mining: MiningConfig::default(),
            default_radius_km: DEFAULT_RADIUS_KM,
            cache_ttl: Duration::from_secs(30),
        }
    }
}

struct Inner {
    store: Arc<Store>,
    orders: Arc<Orders>,
    sessions: Sessions,
    cache: RecommendationCache,
    settings: ApiSettings,
    shutdown: watch::Sender<bool>,
}

#[derive(Clone)]
pub struct AppState(Arc<Inner>);

impl std::fmt::Debug for AppState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AppState").field("settings", &self.0.settings).finish_non_exhaustive()
    }
}

impl AppState {
    pub fn new(orders: Arc<Orders>, settings: ApiSettings) -> Self {
        let (shutdown, _) = watch::channel(false);
        AppState(Arc::new(Inner {
            store: orders.store().clone(),
            orders,
            sessions: Sessions::default(),
            cache: RecommendationCache::new(settings.cache_ttl),
            settings,
            shutdown,
        }))
    }

    pub fn sessions(&self) -> &Sessions {
        &self.0.sessions
    }

    /// Ends every open notification stream.
    pub fn close_streams(&self) {
        self.0.shutdown.send_replace(true);
    }
}

pub struct ApiError(Error);

impl<E: Into<Error>> From<E> for ApiError {
    fn from(e: E) -> Self {
        ApiError(e.into())
    }
}

pub fn status_for(e: &Error) -> StatusCode {
    match e {
        Error::Validation(_) => StatusCode::BAD_REQUEST,
        Error::Unauthenticated(_) => StatusCode::UNAUTHORIZED,
        Error::Forbidden(_) => StatusCode::FORBIDDEN,
        Error::NotFound { .. } => StatusCode::NOT_FOUND,
        Error::Conflict(_) | Error::InvalidState(_) => StatusCode::CONFLICT,
        Error::Load { .. } | Error::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = status_for(&self.0);
        if status.is_server_error() {
            tracing::error!(error = %self.0, "request failed");
        }
        (status, Json(Envelope::<()>::failure(self.0.code(), self.0.to_string()))).into_response()
    }
}

type ApiResult<T> = Result<Json<Envelope<T>>, ApiError>;

fn ok<T>(data: T) -> ApiResult<T> {
    Ok(Json(Envelope::success(data)))
}

/// JSON body whose rejections become enveloped 400s.
struct Body_<T>(T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequest<S> for Body_<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(v)) => Ok(Body_(v)),
            Err(rejection) => Err(Error::Validation(rejection.body_text()).into()),
        }
    }
}

/// Numeric `{id}` path segment.
struct Id(u64);

impl<S: Send + Sync> FromRequestParts<S> for Id {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, Self::Rejection> {
        match Path::<u64>::from_request_parts(parts, state).await {
            Ok(Path(id)) => Ok(Id(id)),
            Err(rejection) => Err(Error::Validation(rejection.body_text()).into()),
        }
    }
}

struct Params<T>(T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequestParts<S> for Params<T> {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, Self::Rejection> {
        match Query::<T>::from_request_parts(parts, state).await {
            Ok(Query(v)) => Ok(Params(v)),
            Err(rejection) => Err(Error::Validation(rejection.body_text()).into()),
        }
    }
}

/// Caller identified by `Authorization: Bearer <token>`.
struct Caller(UserId);

impl FromRequestParts<AppState> for Caller {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &AppState) -> Result<Self, Self::Rejection> {
        let token = parts
            .headers
            .get(header::AUTHORIZATION)
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.strip_prefix("Bearer "))
            .ok_or_else(|| Error::Unauthenticated("missing bearer token".into()))?;
        let user =
            state.0.sessions.resolve(token.trim()).ok_or_else(|| Error::Unauthenticated("unknown token".into()))?;
        Ok(Caller(user))
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/register", post(register))
        .route("/login", post(login))
        .route("/products", get(catalog))
        .route("/shops", get(nearby_shops))
        .route("/shops/{id}", get(shop_detail))
        .route("/shops/{id}/recommendations", get(recommendations))
        .route("/shops/{id}/products", get(shop_products).post(set_price))
        .route("/shops/{id}/orders/pending", get(pending))
        .route("/orders", post(place_order))
        .route("/orders/{id}", get(order_detail))
        .route("/orders/{id}/confirm", post(confirm))
        .route("/orders/{id}/decline", post(decline))
        .route("/notifications/stream", get(stream))
        .fallback(not_found)
        .method_not_allowed_fallback(method_not_allowed)
        .with_state(state)
}

/// Serves until `shutdown` resolves, then closes streams and drains.
pub async fn serve(
    listener: TcpListener,
    state: AppState,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    let app = router(state.clone());
    axum::serve(listener, app)
        .with_graceful_shutdown(async move {
            shutdown.await;
            state.close_streams();
        })
        .await
}

async fn not_found() -> ApiError {
    Error::NotFound { kind: "route", id: 0 }.into()
}

async fn method_not_allowed() -> Response {
    (StatusCode::METHOD_NOT_ALLOWED, Json(Envelope::<()>::failure("method_not_allowed", "method not allowed")))
        .into_response()
}

fn auth_response(state: &AppState, user: UserId) -> Result<AuthResponse, Error> {
    let (role, display_name, shop_ids) = state.0.store.read(|s| -> Result<_, Error> {
        let u = s.user(user)?;
        let shops = s.shops().filter(|sh| sh.owner_user_id == user).map(|sh| sh.id).collect();
        Ok((u.role, u.display_name.clone(), shops))
    })?;
    let token = state.0.sessions.issue(user);
    Ok(AuthResponse { user_id: user, role, display_name, token, shop_ids })
}

async fn register(State(state): State<AppState>, Body_(req): Body_<RegisterRequest>) -> ApiResult<AuthResponse> {
    let location = match (&req.shop, req.role) {
        (Some(_), Role::Customer) => return Err(Error::Validation("customers cannot register a shop".into()).into()),
        (Some(shop), Role::Shopkeeper) => Some(GeoPoint::new(shop.lat, shop.lon)?),
        (None, _) => None,
    };
    let salt = auth::random_salt();
    let user = state.0.store.write(|s| {
        let user = s.register_user(req.role, &req.display_name, &req.contact, &req.password, &salt)?;
        if let (Some(shop), Some(at)) = (&req.shop, location) {
            s.register_shop(user.id, &shop.name, at)?;
        }
        Ok(user.id)
    })?;
    ok(auth_response(&state, user)?)
}

async fn login(State(state): State<AppState>, Body_(req): Body_<LoginRequest>) -> ApiResult<AuthResponse> {
    state.0.store.read(|s| s.authenticate(req.user_id, &req.password).map(|_| ()))?;
    ok(auth_response(&state, req.user_id)?)
}

async fn catalog(State(state): State<AppState>) -> ApiResult<Vec<CatalogEntry>> {
    ok(state.0.store.read(|s| s.catalog().map(|p| CatalogEntry { id: p.id, name: p.name.clone() }).collect()))
}

#[derive(Deserialize, Serialize)]
struct NearbyQuery {
    lat: f64,
    lon: f64,
    radius_km: Option<f64>,
}

async fn nearby_shops(State(state): State<AppState>, Params(q): Params<NearbyQuery>) -> ApiResult<Vec<ShopHit>> {
    let origin = GeoPoint::new(q.lat, q.lon)?;
    let radius = q.radius_km.unwrap_or(state.0.settings.default_radius_km);
    let shops: Vec<_> = state.0.store.read(|s| s.shops().cloned().collect());
    let hits = shops_within(origin, Some(radius), shops.iter().map(|s| (s.id, s.location)))?;
    let by_id = |id: ShopId| shops.iter().find(|s| s.id == id).expect("hit comes from this list");
    ok(hits
        .into_iter()
        .map(|(id, distance_km)| {
            let shop = by_id(id);
            ShopHit {
                id,
                name: shop.name.clone(),
                lat: shop.location.lat_deg(),
                lon: shop.location.lon_deg(),
                distance_km,
            }
        })
        .collect())
}

async fn shop_detail(State(state): State<AppState>, Id(id): Id) -> ApiResult<ShopView> {
    let shop = state.0.store.read(|s| s.shop(ShopId(id)).cloned())?;
    ok(ShopView {
        id: shop.id,
        name: shop.name,
        owner_user_id: shop.owner_user_id,
        lat: shop.location.lat_deg(),
        lon: shop.location.lon_deg(),
    })
}

async fn recommendations(State(state): State<AppState>, Id(id): Id) -> ApiResult<Vec<RuleView>> {
    let shop = ShopId(id);
    let inner = &state.0;
    let rules = inner.cache.get_or_compute(shop, || {
        // Snapshot under the read lock, mine outside it.
        let snapshot = inner.store.read(|s| s.clone());
        Ok(mine_shop_output(&snapshot, shop, &inner.settings.mining)?.rules)
    })?;
    ok(rules.as_ref().clone())
}

async fn shop_products(State(state): State<AppState>, Id(id): Id) -> ApiResult<Vec<ProductView>> {
    let list = state.0.store.list_products(ShopId(id))?;
    ok(list.into_iter().map(|p| ProductView { product_id: p.product_id, name: p.name, price: p.price }).collect())
}

fn require_owner(state: &AppState, shop: ShopId, caller: UserId) -> Result<(), Error> {
    let owner = state.0.store.read(|s| s.shop(shop).map(|s| s.owner_user_id))?;
    if owner != caller {
        return Err(Error::Forbidden(format!("user {caller} does not own shop {shop}")));
    }
    Ok(())
}

async fn set_price(
    State(state): State<AppState>,
    Caller(caller): Caller,
    Id(id): Id,
    Body_(req): Body_<SetPriceRequest>,
) -> ApiResult<ProductView> {
    let shop = ShopId(id);
    require_owner(&state, shop, caller)?;
    let view = state.0.store.write(|s| {
        let product: ProductId = match (req.product_id, req.name.as_deref()) {
            (Some(pid), None) => s.product(pid)?.id,
            (None, Some(name)) => match s.product_by_name(name) {
                Some(p) => p.id,
                None => s.add_product(name)?.id,
            },
            _ => return Err(Error::Validation("give exactly one of product_id or name".into())),
        };
        let row = s.set_price(shop, product, req.price)?;
        Ok(ProductView { product_id: product, name: s.product(product)?.name.clone(), price: row.price })
    })?;
    ok(view)
}

async fn place_order(
    State(state): State<AppState>,
    Caller(caller): Caller,
    Body_(req): Body_<PlaceOrderRequest>,
) -> ApiResult<OrderView> {
    let lines: Vec<(ProductId, u32)> = req.lines.iter().map(|l| (l.product_id, l.quantity)).collect();
    let order = state.0.orders.place_order(caller, req.shop_id, &lines)?;
    ok(OrderView::from(&order))
}

async fn order_detail(State(state): State<AppState>, Caller(caller): Caller, Id(id): Id) -> ApiResult<OrderView> {
    let view = state.0.store.read(|s| -> Result<_, Error> {
        let order = s.order(OrderId(id))?;
        let owner = s.shop(order.shop_id)?.owner_user_id;
        if caller != order.customer_id && caller != owner {
            return Err(Error::Forbidden(format!("order {id} belongs to someone else")));
        }
        Ok(OrderView::from(order))
    })?;
    ok(view)
}

async fn pending(State(state): State<AppState>, Caller(caller): Caller, Id(id): Id) -> ApiResult<Vec<OrderView>> {
    let shop = ShopId(id);
    require_owner(&state, shop, caller)?;
    ok(state.0.orders.pending_queue(shop)?.iter().map(OrderView::from).collect())
}

async fn confirm(State(state): State<AppState>, Caller(caller): Caller, Id(id): Id) -> ApiResult<DecisionView> {
    let (order, bill) = state.0.orders.confirm(OrderId(id), caller)?;
    ok(DecisionView { order: OrderView::from(&order), bill: Some(bill) })
}

async fn decline(State(state): State<AppState>, Caller(caller): Caller, Id(id): Id) -> ApiResult<DecisionView> {
    let order = state.0.orders.decline(OrderId(id), caller)?;
    ok(DecisionView { order: OrderView::from(&order), bill: None })
}

#[derive(Deserialize)]
struct StreamQuery {
    after: Option<u64>,
}

async fn stream(
    State(state): State<AppState>,
    Caller(caller): Caller,
    Params(q): Params<StreamQuery>,
    headers: axum::http::HeaderMap,
) -> Result<Response, ApiError> {
    let last_seen =
        headers.get("last-event-id").and_then(|v| v.to_str().ok()).and_then(|v| v.trim().parse::<u64>().ok());
    let after = q.after.or(last_seen).map(NotificationId);
    let subscription = state.0.orders.subscribe(caller, after)?;
    let shutdown = state.0.shutdown.subscribe();

    let events = futures::stream::unfold((subscription, shutdown), |(mut sub, mut shutdown)| async move {
        if *shutdown.borrow() {
            return None;
        }
        let note = tokio::select! {
            note = sub.next() => note?,
            _ = shutdown.changed() => return None,
        };
        let mut line = serde_json::to_vec(&note).expect("notifications serialize");
        line.push(b'\n');
        Some((Ok::<_, Infallible>(Bytes::from(line)), (sub, shutdown)))
    });

    Ok(Response::builder()
        .header(header::CONTENT_TYPE, "application/x-ndjson")
        .header(header::CACHE_CONTROL, "no-cache")
        .body(Body::from_stream(events))
        .expect("static headers are valid"))
}

package ui.banner;

import android.graphics.drawable.Drawable;
import android.view.View;

class BannerView {
    private View root;

    void show(Drawable art) {
        root.setVisibility(View.VISIBLE);
        root.setBackground(art);
    }
}

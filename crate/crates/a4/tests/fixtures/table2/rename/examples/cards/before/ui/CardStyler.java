package ui;

import android.graphics.drawable.Drawable;
import android.view.View;

public class CardStyler {
    public void style(View card, Drawable bg) {
        card.setBackgroundDrawable(bg);
    }
}

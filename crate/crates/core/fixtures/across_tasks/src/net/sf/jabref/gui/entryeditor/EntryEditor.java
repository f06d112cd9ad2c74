package net.sf.jabref.gui.entryeditor;

public class EntryEditor {
























































































































































































































































































































































































































































































































































































































































































































    public void storeSource() {
















        int count717 = entry.size();
}
